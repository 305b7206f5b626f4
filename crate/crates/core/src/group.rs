//! Coset enumeration over the trivial subgroup, arithmetic in the resulting
//! finite group, and homomorphism checks between presentations.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::presentations::{CayleyFormPresentation, GroupPresentation, Letter, Word};

pub const DEFAULT_MAX_COSETS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("unknown at limit: coset enumeration exceeded {limit} cosets")]
    Overflow { limit: usize },
}

/// A complete, standardized coset table for the trivial subgroup.
///
/// Column `2g` is the action of generator `g`, column `2g+1` that of its
/// inverse. Coset 0 is the subgroup itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetTable {
    pub n: usize,
    pub generators: Vec<String>,
    pub action: Vec<Vec<usize>>,
}

fn column(l: Letter) -> usize {
    2 * l.gen + usize::from(l.inverse)
}

fn inverse_column(c: usize) -> usize {
    c ^ 1
}

impl CosetTable {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn apply(&self, coset: usize, l: Letter) -> usize {
        self.action[coset][column(l)]
    }

    pub fn trace(&self, coset: usize, w: &Word) -> usize {
        w.letters().iter().fold(coset, |c, &l| self.apply(c, l))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("coset table serializes")
    }
}

struct Enumerator {
    ncols: usize,
    table: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    limit: usize,
}

impl Enumerator {
    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = c;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    fn alive(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<(), EnumerationError> {
        if self.table.len() >= self.limit {
            return Err(EnumerationError::Overflow { limit: self.limit });
        }
        let d = self.table.len();
        self.table.push(vec![None; self.ncols]);
        self.parent.push(d);
        self.table[c][x] = Some(d);
        self.table[d][inverse_column(x)] = Some(c);
        Ok(())
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut VecDeque<usize>) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
            queue.push_back(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = VecDeque::new();
        self.merge(a, b, &mut queue);
        while let Some(g) = queue.pop_front() {
            for x in 0..self.ncols {
                let Some(d) = self.table[g][x] else { continue };
                let xi = inverse_column(x);
                if self.table[d][xi] == Some(g) {
                    self.table[d][xi] = None;
                }
                let (mu, nu) = (self.rep(g), self.rep(d));
                if let Some(t) = self.table[mu][x] {
                    self.merge(nu, t, &mut queue);
                } else if let Some(t) = self.table[nu][xi] {
                    self.merge(mu, t, &mut queue);
                } else {
                    self.table[mu][x] = Some(nu);
                    self.table[nu][xi] = Some(mu);
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<(), EnumerationError> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j {
                match self.table[f][w[i]] {
                    Some(n) => {
                        f = n;
                        i += 1;
                    }
                    None => break,
                }
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize {
                match self.table[b][inverse_column(w[j as usize])] {
                    Some(n) => {
                        b = n;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            } else if j == i as isize {
                self.table[f][w[i]] = Some(b);
                self.table[b][inverse_column(w[i])] = Some(f);
                return Ok(());
            } else {
                self.define(f, w[i])?;
            }
        }
    }
}

/// HLT coset enumeration of `p` over the trivial subgroup.
///
/// Relators are scanned in order from each live coset, after which the
/// coset's remaining gaps are filled by new definitions. The finished
/// table is compressed and standardized, so the result does not depend on
/// the order of the relators.
pub fn todd_coxeter(p: &GroupPresentation, max_cosets: usize) -> Result<CosetTable, EnumerationError> {
    let ngens = p.num_generators();
    let ncols = 2 * ngens;
    let relators: Vec<Vec<usize>> = p.relators().iter().map(|r| r.letters().iter().map(|&l| column(l)).collect()).collect();
    let mut e = Enumerator { ncols, table: vec![vec![None; ncols]], parent: vec![0], limit: max_cosets.max(1) };

    let mut c = 0;
    while c < e.table.len() {
        if e.alive(c) {
            for r in &relators {
                e.scan_and_fill(c, r)?;
                if !e.alive(c) {
                    break;
                }
            }
            if e.alive(c) {
                for x in 0..ncols {
                    if e.table[c][x].is_none() {
                        e.define(c, x)?;
                    }
                }
            }
        }
        c += 1;
    }

    // Standardize: renumber live cosets in order of first appearance when
    // reading the table row by row from coset 0.
    let mut order: Vec<usize> = vec![0];
    let mut new_index: HashMap<usize, usize> = HashMap::from([(0, 0)]);
    let mut k = 0;
    while k < order.len() {
        let old = order[k];
        for x in 0..ncols {
            let t = e.table[old][x].expect("complete table");
            let t = e.rep(t);
            if let Entry::Vacant(v) = new_index.entry(t) {
                v.insert(order.len());
                order.push(t);
            }
        }
        k += 1;
    }
    let mut action = Vec::with_capacity(order.len());
    for &old in &order {
        let mut row = Vec::with_capacity(ncols);
        for x in 0..ncols {
            let t = e.table[old][x].expect("complete table");
            let t = e.rep(t);
            row.push(new_index[&t]);
        }
        action.push(row);
    }
    Ok(CosetTable { n: order.len(), generators: p.names(), action })
}

/// A finite group given by a standardized coset table, with shortest-word
/// representatives found by breadth-first search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: CosetTable,
    reps: Vec<Word>,
}

impl FiniteGroup {
    pub fn from_table(table: CosetTable) -> Self {
        let mut reps: Vec<Option<Word>> = vec![None; table.n];
        reps[0] = Some(Word::empty());
        let mut queue = VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            let base = reps[c].clone().expect("visited");
            for g in 0..table.generators.len() {
                for l in [Letter::pos(g), Letter::neg(g)] {
                    let d = table.apply(c, l);
                    if reps[d].is_none() {
                        let mut w = base.clone();
                        w.push(l);
                        reps[d] = Some(w);
                        queue.push_back(d);
                    }
                }
            }
        }
        FiniteGroup { table, reps: reps.into_iter().map(|r| r.expect("connected table")).collect() }
    }

    pub fn enumerate(p: &GroupPresentation, max_cosets: usize) -> Result<Self, EnumerationError> {
        Ok(Self::from_table(todd_coxeter(p, max_cosets)?))
    }

    pub fn order(&self) -> usize {
        self.table.n
    }

    pub fn table(&self) -> &CosetTable {
        &self.table
    }

    pub fn element_of(&self, w: &Word) -> usize {
        self.table.trace(0, w)
    }

    pub fn rep(&self, x: usize) -> &Word {
        &self.reps[x]
    }

    pub fn multiply(&self, x: usize, y: usize) -> usize {
        self.table.trace(x, &self.reps[y])
    }

    pub fn inverse(&self, x: usize) -> usize {
        self.element_of(&self.reps[x].inverse())
    }
}

/// Arithmetic in the group of a presentation: exact when the group was
/// enumerated, formal (free reduction only) otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupOracle {
    Finite { generators: Vec<String>, group: FiniteGroup },
    Symbolic { generators: Vec<String> },
}

impl GroupOracle {
    pub fn finite(p: &GroupPresentation, max_cosets: usize) -> Result<Self, EnumerationError> {
        Ok(GroupOracle::Finite { generators: p.names(), group: FiniteGroup::enumerate(p, max_cosets)? })
    }

    pub fn symbolic(generators: Vec<String>) -> Self {
        GroupOracle::Symbolic { generators }
    }

    /// Finite mode when enumeration succeeds within the limit, symbolic
    /// otherwise.
    pub fn for_presentation(p: &GroupPresentation, max_cosets: usize) -> Self {
        Self::finite(p, max_cosets).unwrap_or_else(|_| Self::symbolic(p.names()))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, GroupOracle::Finite { .. })
    }

    pub fn generators(&self) -> &[String] {
        match self {
            GroupOracle::Finite { generators, .. } | GroupOracle::Symbolic { generators } => generators,
        }
    }

    pub fn order(&self) -> Option<usize> {
        match self {
            GroupOracle::Finite { group, .. } => Some(group.order()),
            GroupOracle::Symbolic { .. } => None,
        }
    }

    /// Canonical form: the BFS representative in finite mode, the freely
    /// reduced word in symbolic mode.
    pub fn canonical(&self, w: &Word) -> Word {
        match self {
            GroupOracle::Finite { group, .. } => group.rep(group.element_of(w)).clone(),
            GroupOracle::Symbolic { .. } => w.free_reduce(),
        }
    }

    pub fn multiply(&self, a: &Word, b: &Word) -> Word {
        self.canonical(&a.concat(b))
    }

    pub fn inverse(&self, a: &Word) -> Word {
        self.canonical(&a.inverse())
    }

    /// `Some(true/false)` when decidable here; symbolic mode only decides
    /// words that freely reduce to the empty word.
    pub fn is_identity(&self, w: &Word) -> Option<bool> {
        match self {
            GroupOracle::Finite { group, .. } => Some(group.element_of(w) == 0),
            GroupOracle::Symbolic { .. } => w.free_reduce().is_empty().then_some(true),
        }
    }

    /// All elements as canonical words (finite mode only).
    pub fn elements(&self) -> Option<Vec<Word>> {
        match self {
            GroupOracle::Finite { group, .. } => Some((0..group.order()).map(|x| group.rep(x).clone()).collect()),
            GroupOracle::Symbolic { .. } => None,
        }
    }
}

pub fn group_multiply(o: &GroupOracle, w1: &Word, w2: &Word) -> Word {
    o.multiply(w1, w2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum HomVerdict {
    Ok,
    Failing { relation: usize, image: String },
    Unknown { limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomError {
    #[error("expected {expected} generator images, got {got}")]
    MissingImage { expected: usize, got: usize },
    #[error("image of generator {0} uses a generator outside the target")]
    InvalidImage(usize),
}

fn check_images(p: &GroupPresentation, q_gens: usize, images: &[Word]) -> Result<(), HomError> {
    if images.len() != p.num_generators() {
        return Err(HomError::MissingImage { expected: p.num_generators(), got: images.len() });
    }
    for (g, w) in images.iter().enumerate() {
        if w.letters().iter().any(|l| l.gen >= q_gens) {
            return Err(HomError::InvalidImage(g));
        }
    }
    Ok(())
}

/// Checks that `g -> images[g]` defines a homomorphism from the group of
/// `p` to that of `q`, using an already enumerated table of `q`.
pub fn verify_homomorphism_with(p: &GroupPresentation, q: &CosetTable, images: &[Word]) -> Result<HomVerdict, HomError> {
    check_images(p, q.generators.len(), images)?;
    for (r, rel) in p.relations.iter().enumerate() {
        let w = rel.lhs.concat(&rel.rhs.inverse()).substitute(|g| images[g].clone());
        if q.trace(0, &w) != 0 {
            return Ok(HomVerdict::Failing { relation: r, image: w.free_reduce().render(&q.generators) });
        }
    }
    Ok(HomVerdict::Ok)
}

pub fn verify_homomorphism(
    p: &GroupPresentation,
    q: &GroupPresentation,
    images: &[Word],
    max_cosets: usize,
) -> Result<HomVerdict, HomError> {
    check_images(p, q.num_generators(), images)?;
    if p.relations.is_empty() {
        return Ok(HomVerdict::Ok);
    }
    match todd_coxeter(q, max_cosets) {
        Ok(t) => verify_homomorphism_with(p, &t, images),
        Err(EnumerationError::Overflow { limit }) => Ok(HomVerdict::Unknown { limit }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail(String),
    Unknown(String),
    Skipped(String),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    fn from_hom(h: Result<HomVerdict, HomError>) -> Verdict {
        match h {
            Ok(HomVerdict::Ok) => Verdict::Pass,
            Ok(HomVerdict::Failing { relation, image }) => Verdict::Fail(format!("relation {relation} maps to {image} != 1")),
            Ok(HomVerdict::Unknown { limit }) => Verdict::Unknown(format!("overflow at {limit} cosets")),
            Err(e) => Verdict::Fail(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub relation_multiset: Verdict,
    pub forward_homomorphism: Verdict,
    pub backward_homomorphism: Verdict,
    pub orders: Verdict,
    pub input_order: Option<usize>,
    pub output_order: Option<usize>,
}

impl TheoremReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts().iter().all(|v| matches!(v, Verdict::Pass | Verdict::Skipped(_)))
    }

    pub fn any_fail(&self) -> bool {
        self.verdicts().iter().any(|v| v.is_fail())
    }

    pub fn any_unknown(&self) -> bool {
        self.verdicts().iter().any(|v| v.is_unknown())
    }

    pub fn verdicts(&self) -> [&Verdict; 4] {
        [&self.relation_multiset, &self.forward_homomorphism, &self.backward_homomorphism, &self.orders]
    }
}

/// Multiset of `ab = c` relations by generator names, or `None` when some
/// relation is not of that shape.
pub fn cayley_relation_multiset(p: &GroupPresentation) -> Option<Vec<(String, String, String)>> {
    let names = p.names();
    let mut out = Vec::new();
    for r in &p.relations {
        let (l, rh) = (r.lhs.letters(), r.rhs.letters());
        if l.len() != 2 || rh.len() != 1 || !r.lhs.is_positive() || !r.rhs.is_positive() {
            return None;
        }
        out.push((names[l[0].gen].clone(), names[l[1].gen].clone(), names[rh[0].gen].clone()));
    }
    out.sort();
    Some(out)
}

/// Checks that `output` presents the same group as the Cayley-form
/// `input`: literal relation-multiset equality (when `compare_relations`),
/// homomorphisms in both directions, and equal orders.
///
/// `forward[a]` is the image in `output` of input generator `a`;
/// `backward[x]` the image in `input` of output generator `x`.
pub fn verify_theorem(
    input: &CayleyFormPresentation,
    output: &GroupPresentation,
    forward: &[Word],
    backward: &[Word],
    compare_relations: bool,
    max_cosets: usize,
) -> TheoremReport {
    let input_gp = input.to_group_presentation();
    let relation_multiset = if !compare_relations {
        Verdict::Skipped("relation shapes are not preserved by this strategy".into())
    } else {
        let mut expected: Vec<(String, String, String)> = input.relations.iter().map(|r| input.triple_names(r)).collect();
        expected.sort();
        match cayley_relation_multiset(output) {
            Some(got) if got == expected => Verdict::Pass,
            Some(got) => Verdict::Fail(format!("expected {} relations {:?}, got {:?}", expected.len(), expected, got)),
            None => Verdict::Fail("output has relations not of the form ab=c".into()),
        }
    };

    let in_table = todd_coxeter(&input_gp, max_cosets);
    let out_table = todd_coxeter(output, max_cosets);
    let forward_homomorphism = match &out_table {
        Ok(t) => Verdict::from_hom(verify_homomorphism_with(&input_gp, t, forward)),
        Err(_) if input_gp.relations.is_empty() => {
            Verdict::from_hom(check_images(&input_gp, output.num_generators(), forward).map(|_| HomVerdict::Ok))
        }
        Err(e) => Verdict::Unknown(e.to_string()),
    };
    let backward_homomorphism = match &in_table {
        Ok(t) => Verdict::from_hom(verify_homomorphism_with(output, t, backward)),
        Err(_) if output.relations.is_empty() => {
            Verdict::from_hom(check_images(output, input.num_generators(), backward).map(|_| HomVerdict::Ok))
        }
        Err(e) => Verdict::Unknown(e.to_string()),
    };
    let input_order = in_table.as_ref().ok().map(|t| t.n);
    let output_order = out_table.as_ref().ok().map(|t| t.n);
    let orders = match (input_order, output_order) {
        (Some(a), Some(b)) if a == b => Verdict::Pass,
        (Some(a), Some(b)) => Verdict::Fail(format!("orders differ: {a} vs {b}")),
        _ => Verdict::Unknown(format!("enumeration did not finish within {max_cosets} cosets")),
    };
    TheoremReport { relation_multiset, forward_homomorphism, backward_homomorphism, orders, input_order, output_order }
}
