//! Words over a finite alphabet, group presentations, the text grammar used
//! to read and write them, and conversion of arbitrary finite presentations
//! into Cayley form (every relation reads `ab = c`).

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One letter of a word: a generator index together with its sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(gen: usize) -> Self {
        Letter { gen, inverse: false }
    }

    pub fn neg(gen: usize) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }
}

/// A word in the free group, not necessarily reduced.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn gen(g: usize) -> Self {
        Word(vec![Letter::pos(g)])
    }

    /// Positive word `g_0 g_1 ...`.
    pub fn positive(gens: &[usize]) -> Self {
        Word(gens.iter().map(|&g| Letter::pos(g)).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|l| !l.inverse)
    }

    /// Concatenation without reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn free_reduce(&self) -> Word {
        free_reduce(self)
    }

    /// Free reduction followed by cancellation of inverse letters at the two
    /// ends; the result is a conjugate of the input.
    pub fn cyclic_reduce(&self) -> Word {
        let w = free_reduce(self);
        let v = w.0;
        let (mut lo, mut hi) = (0, v.len());
        while hi - lo >= 2 && v[lo] == v[hi - 1].inv() {
            lo += 1;
            hi -= 1;
        }
        Word(v[lo..hi].to_vec())
    }

    /// Number of letters equal to `g` or `g^-1`.
    pub fn occurrences(&self, g: usize) -> usize {
        self.0.iter().filter(|l| l.gen == g).count()
    }

    pub fn contains_gen(&self, g: usize) -> bool {
        self.0.iter().any(|l| l.gen == g)
    }

    /// Replaces every letter by the image of its generator (inverted for
    /// inverse letters). No reduction is performed.
    pub fn substitute<F: Fn(usize) -> Word>(&self, image: F) -> Word {
        let mut out = Vec::new();
        for l in &self.0 {
            let w = image(l.gen);
            if l.inverse {
                out.extend(w.inverse().0);
            } else {
                out.extend(w.0);
            }
        }
        Word(out)
    }

    pub fn map_gens<F: Fn(usize) -> usize>(&self, f: F) -> Word {
        Word(self.0.iter().map(|l| Letter { gen: f(l.gen), inverse: l.inverse }).collect())
    }

    /// All rotations of the word.
    pub fn rotations(&self) -> impl Iterator<Item = Word> + '_ {
        let n = self.0.len();
        (0..n.max(1)).map(move |k| {
            if n == 0 {
                Word::empty()
            } else {
                let mut v = self.0[k..].to_vec();
                v.extend_from_slice(&self.0[..k]);
                Word(v)
            }
        })
    }

    /// Representative of the class of this relator under cyclic permutation
    /// and inversion, after cyclic reduction.
    pub fn relator_key(&self) -> Word {
        let r = self.cyclic_reduce();
        let inv = r.inverse();
        r.rotations().chain(inv.rotations()).min().unwrap_or_default()
    }

    /// Renders the word in the presentation grammar (`a*b^-1`, `1` for the
    /// empty word). Runs of one letter are written as powers.
    pub fn render<S: AsRef<str>>(&self, names: &[S]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == l {
                run += 1;
            }
            let name = names.get(l.gen).map(|s| s.as_ref().to_string()).unwrap_or_else(|| format!("x{}", l.gen));
            let exp = if l.inverse { -(run as i64) } else { run as i64 };
            if exp == 1 {
                parts.push(name);
            } else {
                parts.push(format!("{name}^{exp}"));
            }
            i += run;
        }
        parts.join("*")
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Freely reduces a word: no adjacent `x x^-1` or `x^-1 x` remains.
pub fn free_reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w.letters() {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

/// Where a generator came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "of", rename_all = "snake_case")]
pub enum GenOrigin {
    User,
    InverseOf(usize),
    Identity,
    Chain(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSymbol {
    pub name: String,
    pub origin: GenOrigin,
}

impl GenSymbol {
    pub fn user(name: impl Into<String>) -> Self {
        GenSymbol { name: name.into(), origin: GenOrigin::User }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub lhs: Word,
    pub rhs: Word,
}

impl Relation {
    pub fn new(lhs: Word, rhs: Word) -> Self {
        Relation { lhs, rhs }
    }

    /// `lhs * rhs^-1`, freely reduced.
    pub fn relator(&self) -> Word {
        self.lhs.concat(&self.rhs.inverse()).free_reduce()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("duplicate generator name {0:?}")]
    DuplicateGenerator(String),
    #[error("invalid generator name {0:?}")]
    InvalidName(String),
    #[error("relation {relation} uses undeclared generator index {gen}")]
    UndeclaredGenerator { relation: usize, gen: usize },
}

const RESERVED: [&str; 3] = ["0", "1", "inf"];

pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn is_reserved_name(name: &str) -> bool {
    RESERVED.contains(&name)
}

/// A finite group presentation `<A | R>`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub generators: Vec<GenSymbol>,
    pub relations: Vec<Relation>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<GenSymbol>, relations: Vec<Relation>) -> Result<Self, PresentationError> {
        let p = GroupPresentation { generators, relations };
        p.validate()?;
        Ok(p)
    }

    /// Presentation whose generators all have user origin.
    pub fn from_names<S: AsRef<str>>(names: &[S], relations: Vec<Relation>) -> Result<Self, PresentationError> {
        Self::new(names.iter().map(|n| GenSymbol::user(n.as_ref())).collect(), relations)
    }

    pub fn validate(&self) -> Result<(), PresentationError> {
        let mut seen = HashSet::new();
        for g in &self.generators {
            if !is_valid_name(&g.name) || is_reserved_name(&g.name) {
                return Err(PresentationError::InvalidName(g.name.clone()));
            }
            if !seen.insert(g.name.as_str()) {
                return Err(PresentationError::DuplicateGenerator(g.name.clone()));
            }
        }
        for (r, rel) in self.relations.iter().enumerate() {
            for l in rel.lhs.letters().iter().chain(rel.rhs.letters()) {
                if l.gen >= self.generators.len() {
                    return Err(PresentationError::UndeclaredGenerator { relation: r, gen: l.gen });
                }
            }
        }
        Ok(())
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Nontrivial relators `lhs * rhs^-1`, cyclically reduced.
    pub fn relators(&self) -> Vec<Word> {
        self.relations.iter().map(|r| r.lhs.concat(&r.rhs.inverse()).cyclic_reduce()).filter(|w| !w.is_empty()).collect()
    }

    /// Text in the presentation grammar; `parse_group_presentation` reads
    /// it back to an equal presentation.
    pub fn to_text(&self) -> String {
        let names = self.names();
        let mut out = String::from("gens");
        for n in &names {
            out.push(' ');
            out.push_str(n);
        }
        out.push('\n');
        for r in &self.relations {
            out.push_str(&format!("rel {} = {}\n", r.lhs.render(&names), r.rhs.render(&names)));
        }
        out
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.names();
        let rels: Vec<String> = self.relations.iter().map(|r| format!("{}={}", r.lhs.render(&names), r.rhs.render(&names))).collect();
        write!(f, "<{} | {}>", names.join(","), rels.join(", "))
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("undeclared generator {0:?}")]
    UndeclaredGenerator(String),
    #[error("duplicate generator {0:?}")]
    DuplicateGenerator(String),
    #[error("reserved name {0:?} cannot be a generator")]
    ReservedName(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

struct LineCursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    _src: &'a str,
}

impl<'a> LineCursor<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        LineCursor { chars: src.chars().collect(), pos: 0, line, _src: src }
    }

    fn err(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line, column: column + 1, kind }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn name(&mut self) -> Option<(usize, String)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_') {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            Some((start, self.chars[start..self.pos].iter().collect()))
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => Err(self.err(self.pos, ParseErrorKind::Syntax(format!("expected '{c}', found '{x}'")))),
            None => Err(self.err(self.pos, ParseErrorKind::Syntax(format!("expected '{c}', found end of line")))),
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.chars.len() && self.chars[self.pos] == '-' {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            return Err(self.err(start, ParseErrorKind::Syntax("expected integer exponent".into())));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<i64>().map_err(|_| self.err(start, ParseErrorKind::Syntax(format!("exponent {s} out of range"))))
    }

    fn word(&mut self, lookup: &HashMap<String, usize>) -> Result<Word, ParseError> {
        let mut w = Word::empty();
        loop {
            let (col, name) =
                self.name().ok_or_else(|| self.err(self.pos, ParseErrorKind::Syntax("expected generator name or 1".into())))?;
            let mut exp = 1i64;
            if self.peek() == Some('^') {
                self.pos += 1;
                exp = self.integer()?;
            }
            if exp.unsigned_abs() > 1 << 16 {
                return Err(self.err(col, ParseErrorKind::Syntax("exponent too large".into())));
            }
            if name != "1" {
                let g = *lookup.get(&name).ok_or_else(|| self.err(col, ParseErrorKind::UndeclaredGenerator(name.clone())))?;
                let l = if exp < 0 { Letter::neg(g) } else { Letter::pos(g) };
                for _ in 0..exp.unsigned_abs() {
                    w.push(l);
                }
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                return Ok(w);
            }
        }
    }
}

/// Parses the line-based presentation grammar:
///
/// ```text
/// # comment
/// gens a b c
/// rel a*b = c
/// rel a^4 = 1
/// ```
pub fn parse_group_presentation(text: &str) -> Result<GroupPresentation, ParseError> {
    let mut gens: Vec<GenSymbol> = Vec::new();
    let mut lookup: HashMap<String, usize> = HashMap::new();
    let mut relations = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut cur = LineCursor::new(line, ln + 1);
        if cur.at_end() {
            continue;
        }
        let (kcol, keyword) = cur.name().ok_or_else(|| cur.err(cur.pos, ParseErrorKind::Syntax("expected 'gens' or 'rel'".into())))?;
        match keyword.as_str() {
            "gens" => {
                while !cur.at_end() {
                    let (col, name) =
                        cur.name().ok_or_else(|| cur.err(cur.pos, ParseErrorKind::Syntax("expected generator name".into())))?;
                    if is_reserved_name(&name) {
                        return Err(cur.err(col, ParseErrorKind::ReservedName(name)));
                    }
                    if lookup.contains_key(&name) {
                        return Err(cur.err(col, ParseErrorKind::DuplicateGenerator(name)));
                    }
                    lookup.insert(name.clone(), gens.len());
                    gens.push(GenSymbol::user(name));
                }
            }
            "rel" => {
                let lhs = cur.word(&lookup)?;
                cur.expect('=')?;
                let rhs = cur.word(&lookup)?;
                if !cur.at_end() {
                    return Err(cur.err(cur.pos, ParseErrorKind::Syntax("trailing input after relation".into())));
                }
                relations.push(Relation::new(lhs, rhs));
            }
            other => {
                return Err(cur.err(kcol, ParseErrorKind::Syntax(format!("unknown declaration {other:?}"))));
            }
        }
    }
    Ok(GroupPresentation { generators: gens, relations })
}

// ---------------------------------------------------------------------------
// Cayley form

/// The relation `a b = c` between three generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CayleyRelation {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl CayleyRelation {
    pub fn new(a: usize, b: usize, c: usize) -> Self {
        CayleyRelation { a, b, c }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CayleyFormPresentation {
    pub generators: Vec<GenSymbol>,
    pub relations: Vec<CayleyRelation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum Violation {
    #[error("relation {relation} refers to undeclared generator index {gen}")]
    UndeclaredGenerator { relation: usize, gen: usize },
    #[error("relation {duplicate} duplicates relation {first}; duplicates removed")]
    DuplicateRelation { first: usize, duplicate: usize },
    #[error("duplicate generator name {0:?}")]
    DuplicateGeneratorName(String),
    #[error("invalid generator name {0:?}")]
    InvalidName(String),
}

impl Violation {
    pub fn is_warning(&self) -> bool {
        matches!(self, Violation::DuplicateRelation { .. })
    }
}

impl CayleyFormPresentation {
    /// Builds a presentation from generator names and `(a, b, c)` name triples.
    pub fn from_names<S: AsRef<str>>(names: &[S], triples: &[(S, S, S)]) -> Result<Self, PresentationError> {
        let generators: Vec<GenSymbol> = names.iter().map(|n| GenSymbol::user(n.as_ref())).collect();
        let idx = |s: &S| -> Result<usize, PresentationError> {
            names.iter().position(|n| n.as_ref() == s.as_ref()).ok_or_else(|| PresentationError::InvalidName(s.as_ref().to_string()))
        };
        let mut relations = Vec::new();
        for (a, b, c) in triples {
            relations.push(CayleyRelation::new(idx(a)?, idx(b)?, idx(c)?));
        }
        let p = CayleyFormPresentation { generators, relations };
        if let Some(v) = p.validate().into_iter().find(|v| !v.is_warning()) {
            return Err(match v {
                Violation::DuplicateGeneratorName(n) => PresentationError::DuplicateGenerator(n),
                Violation::InvalidName(n) => PresentationError::InvalidName(n),
                Violation::UndeclaredGenerator { relation, gen } => PresentationError::UndeclaredGenerator { relation, gen },
                Violation::DuplicateRelation { .. } => unreachable!(),
            });
        }
        Ok(p)
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    /// All violations of the Cayley-form invariants; duplicates are
    /// reported as warnings.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for g in &self.generators {
            if !is_valid_name(&g.name) || is_reserved_name(&g.name) {
                out.push(Violation::InvalidName(g.name.clone()));
            }
            if !seen.insert(g.name.as_str()) {
                out.push(Violation::DuplicateGeneratorName(g.name.clone()));
            }
        }
        let n = self.generators.len();
        let mut first: HashMap<CayleyRelation, usize> = HashMap::new();
        for (r, rel) in self.relations.iter().enumerate() {
            for g in [rel.a, rel.b, rel.c] {
                if g >= n {
                    out.push(Violation::UndeclaredGenerator { relation: r, gen: g });
                }
            }
            match first.get(rel) {
                Some(&f) => out.push(Violation::DuplicateRelation { first: f, duplicate: r }),
                None => {
                    first.insert(*rel, r);
                }
            }
        }
        out
    }

    /// Copy with repeated triples removed, keeping first occurrences.
    pub fn deduplicated(&self) -> Self {
        let mut seen = HashSet::new();
        CayleyFormPresentation {
            generators: self.generators.clone(),
            relations: self.relations.iter().copied().filter(|r| seen.insert(*r)).collect(),
        }
    }

    pub fn to_group_presentation(&self) -> GroupPresentation {
        GroupPresentation {
            generators: self.generators.clone(),
            relations: self.relations.iter().map(|r| Relation::new(Word::positive(&[r.a, r.b]), Word::gen(r.c))).collect(),
        }
    }

    pub fn triple_names(&self, r: &CayleyRelation) -> (String, String, String) {
        let n = |g: usize| self.generators[g].name.clone();
        (n(r.a), n(r.b), n(r.c))
    }

    pub fn to_text(&self) -> String {
        self.to_group_presentation().to_text()
    }
}

pub fn validate_cayley_form(p: &CayleyFormPresentation) -> Vec<Violation> {
    p.validate()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CayleyConversion {
    pub presentation: CayleyFormPresentation,
    /// Index in the new alphabet of every original generator.
    pub gen_map: Vec<usize>,
    /// True when the input was already in Cayley form and only
    /// deduplication was applied.
    pub already_cayley: bool,
}

fn cayley_shape(rel: &Relation) -> Option<CayleyRelation> {
    let (l, r) = (rel.lhs.letters(), rel.rhs.letters());
    let pos = |w: &Word| w.is_positive();
    if l.len() == 2 && r.len() == 1 && pos(&rel.lhs) && pos(&rel.rhs) {
        Some(CayleyRelation::new(l[0].gen, l[1].gen, r[0].gen))
    } else if l.len() == 1 && r.len() == 2 && pos(&rel.lhs) && pos(&rel.rhs) {
        Some(CayleyRelation::new(r[0].gen, r[1].gen, l[0].gen))
    } else {
        None
    }
}

struct CayleyBuilder {
    gens: Vec<GenSymbol>,
    names: HashSet<String>,
    triples: Vec<CayleyRelation>,
    identity: Option<usize>,
    inverses: HashMap<usize, usize>,
}

impl CayleyBuilder {
    fn fresh(&mut self, base: String, origin: GenOrigin) -> usize {
        let mut name = base;
        while self.names.contains(&name) || is_reserved_name(&name) {
            name.push('_');
        }
        self.names.insert(name.clone());
        self.gens.push(GenSymbol { name, origin });
        self.gens.len() - 1
    }

    fn identity(&mut self) -> usize {
        if let Some(u) = self.identity {
            return u;
        }
        let u = self.fresh("u".into(), GenOrigin::Identity);
        self.identity = Some(u);
        self.triples.push(CayleyRelation::new(u, u, u));
        u
    }

    fn inverse_of(&mut self, g: usize) -> usize {
        if let Some(&gi) = self.inverses.get(&g) {
            return gi;
        }
        let u = self.identity();
        let gi = self.fresh(format!("{}_inv", self.gens[g].name), GenOrigin::InverseOf(g));
        self.inverses.insert(g, gi);
        self.triples.push(CayleyRelation::new(g, gi, u));
        self.triples.push(CayleyRelation::new(gi, g, u));
        gi
    }

    fn positive(&mut self, w: &Word) -> Vec<usize> {
        w.letters().iter().map(|l| if l.inverse { self.inverse_of(l.gen) } else { l.gen }).collect()
    }

    /// Splits `w_1 ... w_k = target` into `k - 1` triples.
    fn chain(&mut self, w: &[usize], target: usize, rel_no: usize, counter: &mut usize) {
        if w.len() == 1 {
            let u = self.identity();
            self.triples.push(CayleyRelation::new(u, w[0], target));
            return;
        }
        let mut cur = w[0];
        for &x in &w[1..w.len() - 1] {
            let d = self.fresh(format!("d{}_{}", *counter, rel_no), GenOrigin::Chain(*counter));
            *counter += 1;
            self.triples.push(CayleyRelation::new(cur, x, d));
            cur = d;
        }
        self.triples.push(CayleyRelation::new(cur, w[w.len() - 1], target));
    }
}

/// Converts a presentation into Cayley form.
///
/// Presentations already made of `ab = c` relations are only deduplicated.
/// Otherwise an identity generator `u` with `uu = u` is introduced when
/// needed, inverse letters are replaced by fresh generators `g_inv` with
/// `g g_inv = u` and `g_inv g = u`, and each relation `w = t` with `t` a
/// single generator is split along fresh chain generators `d<k>_<r>`.
pub fn to_cayley_form(p: &GroupPresentation) -> CayleyConversion {
    let shaped: Option<Vec<CayleyRelation>> = p.relations.iter().map(cayley_shape).collect();
    if let Some(triples) = shaped {
        let pres = CayleyFormPresentation { generators: p.generators.clone(), relations: triples }.deduplicated();
        return CayleyConversion { presentation: pres, gen_map: (0..p.num_generators()).collect(), already_cayley: true };
    }

    let mut b = CayleyBuilder {
        gens: p.generators.clone(),
        names: p.generators.iter().map(|g| g.name.clone()).collect(),
        triples: Vec::new(),
        identity: None,
        inverses: HashMap::new(),
    };
    for (r, rel) in p.relations.iter().enumerate() {
        let rel_no = r + 1;
        if let Some(t) = cayley_shape(rel) {
            b.triples.push(t);
            continue;
        }
        let lhs = rel.lhs.free_reduce();
        let rhs = rel.rhs.free_reduce();
        if lhs == rhs {
            continue;
        }
        let mut lp = b.positive(&lhs);
        let mut rp = b.positive(&rhs);
        if lp.is_empty() {
            std::mem::swap(&mut lp, &mut rp);
        }
        let mut counter = 2;
        if rp.is_empty() {
            let u = b.identity();
            b.chain(&lp, u, rel_no, &mut counter);
        } else if rp.len() == 1 {
            b.chain(&lp, rp[0], rel_no, &mut counter);
        } else if lp.len() == 1 {
            b.chain(&rp, lp[0], rel_no, &mut counter);
        } else {
            let t = b.fresh(format!("d{counter}_{rel_no}"), GenOrigin::Chain(counter));
            counter += 1;
            b.chain(&lp, t, rel_no, &mut counter);
            b.chain(&rp, t, rel_no, &mut counter);
        }
    }
    let pres = CayleyFormPresentation { generators: b.gens, relations: b.triples }.deduplicated();
    CayleyConversion { presentation: pres, gen_map: (0..p.num_generators()).collect(), already_cayley: false }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[(usize, bool)]) -> Word {
        letters.iter().map(|&(g, inv)| Letter { gen: g, inverse: inv }).collect()
    }

    #[test]
    fn parses_fibonacci_presentation() {
        let p = parse_group_presentation("gens a b c\nrel a*b=c\nrel b*c=a\nrel c*a=b\n").unwrap();
        assert_eq!(p.num_generators(), 3);
        assert_eq!(p.relations.len(), 3);
        assert_eq!(p.relations[0].lhs, Word::positive(&[0, 1]));
        assert_eq!(p.relations[0].rhs, Word::gen(2));
    }

    #[test]
    fn parses_relator_form() {
        let p = parse_group_presentation("gens a\nrel a^3=1").unwrap();
        assert_eq!(p.relations[0].lhs, Word::positive(&[0, 0, 0]));
        assert!(p.relations[0].rhs.is_empty());
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = parse_group_presentation("gens a\nrel b=a").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UndeclaredGenerator("b".into()));
        assert_eq!((e.line, e.column), (2, 5));

        let e = parse_group_presentation("gens a a").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateGenerator("a".into()));
        assert_eq!(e.column, 8);

        let e = parse_group_presentation("gens inf").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::ReservedName(_)));

        let e = parse_group_presentation("gens a\nrel a*=1").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));

        let e = parse_group_presentation("generators a").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
    }

    #[test]
    fn parses_negative_exponents_and_comments() {
        let p = parse_group_presentation("# dihedral\ngens r s   # two\nrel r^-2 * s = s*r^2\n").unwrap();
        assert_eq!(p.relations[0].lhs, w(&[(0, true), (0, true), (1, false)]));
        assert_eq!(p.relations[0].rhs, w(&[(1, false), (0, false), (0, false)]));
    }

    #[test]
    fn text_roundtrip() {
        let src = "gens a b\nrel a^-1*b^2 = 1\nrel a*b = b*a\n";
        let p = parse_group_presentation(src).unwrap();
        assert_eq!(parse_group_presentation(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn free_reduction_examples() {
        assert_eq!(free_reduce(&w(&[(0, false), (0, true), (1, false)])), Word::gen(1));
        assert_eq!(free_reduce(&Word::empty()), Word::empty());
        assert_eq!(free_reduce(&w(&[(0, false), (1, false), (1, true), (0, true)])), Word::empty());
    }

    #[test]
    fn cyclic_reduction_and_relator_key() {
        let x = w(&[(1, false), (0, false), (2, false), (1, true)]);
        assert_eq!(x.cyclic_reduce(), w(&[(0, false), (2, false)]));
        let r = w(&[(0, false), (1, false), (2, true)]);
        let rot = w(&[(2, true), (0, false), (1, false)]);
        assert_eq!(r.relator_key(), rot.relator_key());
        assert_eq!(r.relator_key(), r.inverse().relator_key());
    }

    #[test]
    fn cayley_form_fixed_point() {
        let p = parse_group_presentation("gens a b c\nrel a*b=c\nrel b*c=a\nrel c*a=b").unwrap();
        let conv = to_cayley_form(&p);
        assert!(conv.already_cayley);
        assert_eq!(conv.gen_map, vec![0, 1, 2]);
        assert_eq!(
            conv.presentation.relations,
            vec![CayleyRelation::new(0, 1, 2), CayleyRelation::new(1, 2, 0), CayleyRelation::new(2, 0, 1)]
        );
    }

    #[test]
    fn cyclic_group_of_order_three() {
        let p = parse_group_presentation("gens a\nrel a^3=1").unwrap();
        let conv = to_cayley_form(&p);
        let c = &conv.presentation;
        assert_eq!(c.names(), vec!["a", "u", "d2_1"]);
        let mut rels = c.relations.clone();
        rels.sort();
        let (a, u, d) = (0, 1, 2);
        let mut expected = vec![CayleyRelation::new(a, a, d), CayleyRelation::new(d, a, u), CayleyRelation::new(u, u, u)];
        expected.sort();
        assert_eq!(rels, expected);
    }

    #[test]
    fn chain_length_matches_relation_length() {
        // a1 a2 a3 a4 a5 = c  ->  4 triples, 3 chain generators
        let p = parse_group_presentation("gens a b c\nrel a*b*a*b*a = c").unwrap();
        let c = to_cayley_form(&p).presentation;
        assert_eq!(c.relations.len(), 4);
        let chains = c.generators.iter().filter(|g| matches!(g.origin, GenOrigin::Chain(_))).count();
        assert_eq!(chains, 3);
        assert!(c.validate().is_empty());
    }

    #[test]
    fn short_relators() {
        let p = parse_group_presentation("gens a b\nrel a = 1\nrel a*b = 1").unwrap();
        let c = to_cayley_form(&p).presentation;
        let u = c.generators.iter().position(|g| g.origin == GenOrigin::Identity).unwrap();
        assert!(c.relations.contains(&CayleyRelation::new(u, 0, u)));
        assert!(c.relations.contains(&CayleyRelation::new(0, 1, u)));
    }

    #[test]
    fn inverse_generators_and_name_clashes() {
        let p = parse_group_presentation("gens u a\nrel a^-1 * u = a").unwrap();
        let c = to_cayley_form(&p).presentation;
        let names = c.names();
        assert!(names.contains(&"u_".to_string()));
        assert!(names.contains(&"a_inv".to_string()));
        assert!(c.validate().is_empty());
        let again = to_cayley_form(&c.to_group_presentation());
        assert!(again.already_cayley);
        assert_eq!(again.presentation, c);
    }

    #[test]
    fn validation_reports_all_violations() {
        let mut p = CayleyFormPresentation::from_names(&["a", "b", "c"], &[("a", "b", "c"), ("b", "c", "a"), ("c", "a", "b")]).unwrap();
        assert!(validate_cayley_form(&p).is_empty());
        p.relations.push(CayleyRelation::new(0, 1, 7));
        let v = validate_cayley_form(&p);
        assert_eq!(v, vec![Violation::UndeclaredGenerator { relation: 3, gen: 7 }]);

        let d = CayleyFormPresentation {
            generators: vec![GenSymbol::user("a"), GenSymbol::user("b"), GenSymbol::user("c")],
            relations: vec![CayleyRelation::new(0, 1, 2), CayleyRelation::new(0, 1, 2)],
        };
        let v = validate_cayley_form(&d);
        assert_eq!(v.len(), 1);
        assert!(v[0].is_warning());
        assert_eq!(d.deduplicated().relations.len(), 1);
    }
}
