//! Tietze transformations with a full substitution trace: generator
//! elimination, the elimination order of the `B_G` proof, a greedy
//! strategy for arbitrary presentations, and the final grid table.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::band::ElementLabel;
use crate::group::{todd_coxeter, DEFAULT_MAX_COSETS};
use crate::ig::{IgPresentation, RelationSource};
use crate::presentations::{GenSymbol, GroupPresentation, Relation, Word};
use crate::squares::SquareKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Paper,
    Greedy,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Paper => "paper",
            Strategy::Greedy => "greedy",
        })
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(Strategy::Paper),
            "greedy" => Ok(Strategy::Greedy),
            _ => Err(format!("unknown strategy '{s}' (expected paper or greedy)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplifyOptions {
    pub strategy: Strategy,
    /// Greedy only eliminates a generator whose defining word is shorter
    /// than this.
    pub max_defining_len: usize,
    /// Verify the group order every this many steps (`None` disables).
    pub checkpoint_every: Option<usize>,
    pub max_cosets: usize,
}

impl SimplifyOptions {
    pub fn new(strategy: Strategy) -> Self {
        SimplifyOptions { strategy, max_defining_len: 16, checkpoint_every: None, max_cosets: DEFAULT_MAX_COSETS }
    }

    pub fn with_checkpoints(mut self, every: Option<usize>) -> Self {
        self.checkpoint_every = every;
        self
    }

    pub fn with_max_cosets(mut self, max_cosets: usize) -> Self {
        self.max_cosets = max_cosets;
        self
    }
}

impl Default for SimplifyOptions {
    fn default() -> Self {
        SimplifyOptions::new(Strategy::Paper)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TietzeError {
    #[error("generator {0} does not exist")]
    UnknownGenerator(usize),
    #[error("generator {0} occurs in its own defining word")]
    OccursInWord(usize),
    #[error("no relation defines generator {0} by the given word")]
    NoDefiningRelation(usize),
}

/// Removes generator `g` using the relation `g = w`, which must be present
/// (up to cyclic permutation, inversion and free reduction). Generators
/// after `g` shift down by one.
pub fn eliminate_generator(p: &GroupPresentation, g: usize, w: &Word) -> Result<GroupPresentation, TietzeError> {
    let n = p.num_generators();
    if g >= n {
        return Err(TietzeError::UnknownGenerator(g));
    }
    if let Some(l) = w.letters().iter().find(|l| l.gen >= n) {
        return Err(TietzeError::UnknownGenerator(l.gen));
    }
    if w.contains_gen(g) {
        return Err(TietzeError::OccursInWord(g));
    }
    let key = Word::gen(g).concat(&w.inverse()).relator_key();
    if !p.relations.iter().any(|r| r.relator().relator_key() == key) {
        return Err(TietzeError::NoDefiningRelation(g));
    }
    let shift = |x: usize| if x > g { x - 1 } else { x };
    let image = |x: usize| if x == g { w.map_gens(shift) } else { Word::gen(shift(x)) };
    let relations = p
        .relations
        .iter()
        .map(|r| Relation::new(r.lhs.substitute(image).free_reduce(), r.rhs.substitute(image).free_reduce()))
        .filter(|r| !r.relator().cyclic_reduce().is_empty())
        .collect();
    let mut generators = p.generators.clone();
    generators.remove(g);
    Ok(GroupPresentation { generators, relations })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepKind {
    /// `gen` (an original generator) is replaced everywhere by `word`,
    /// read off from relation `relation`.
    Eliminate {
        gen: usize,
        word: Word,
        relation: usize,
    },
    RemoveTrivialRelator {
        relation: usize,
    },
    /// Relators were freely and cyclically reduced.
    FreeReduce {
        changed: usize,
    },
    /// Relation kept in the output.
    Keep {
        relation: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub phase: String,
    #[serde(flatten)]
    pub kind: StepKind,
    pub generators_before: usize,
    pub generators_after: usize,
    pub relations_before: usize,
    pub relations_after: usize,
}

/// Images of all original generators after a phase.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhaseSnapshot {
    pub phase: String,
    pub images: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Checkpoint {
    pub step: usize,
    pub order: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplificationTrace {
    pub strategy: Strategy,
    pub steps: Vec<TraceStep>,
    /// Image of every original generator as a word over the output
    /// generators.
    pub substitution: Vec<Word>,
    /// Original indices of the surviving generators, in output order.
    pub survivors: Vec<usize>,
    pub original_names: Vec<String>,
    pub output_names: Vec<String>,
    /// Survivors were renamed `f(0',a) -> a`.
    pub renamed: bool,
    /// Snapshot images are words over the original generators.
    pub snapshots: Vec<PhaseSnapshot>,
    pub initial_order: Option<usize>,
    pub checkpoints: Vec<Checkpoint>,
    pub warnings: Vec<String>,
}

impl SimplificationTrace {
    pub fn eliminations(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s.kind, StepKind::Eliminate { .. })).count()
    }

    /// Checkpoints whose order differs from the initial one.
    pub fn failed_checkpoints(&self) -> Vec<&Checkpoint> {
        match self.initial_order {
            Some(n) => self.checkpoints.iter().filter(|c| c.order.is_some_and(|m| m != n)).collect(),
            None => Vec::new(),
        }
    }

    /// Names used to render snapshot words: output names for survivors,
    /// original names for everything else.
    fn snapshot_names(&self) -> Vec<String> {
        let mut names = self.original_names.clone();
        for (k, &s) in self.survivors.iter().enumerate() {
            names[s] = self.output_names[k].clone();
        }
        names
    }
}

/// Working state shared by both strategies. Relations are kept in their
/// original form; the current relator of relation `r` is its image under
/// the current substitution.
struct Engine<'a> {
    orig: &'a [Relation],
    images: Vec<Word>,
    alive: Vec<bool>,
    status: Vec<Status>,
    steps: Vec<TraceStep>,
    phase: String,
    checkpoint_every: Option<usize>,
    max_cosets: usize,
    checkpoints: Vec<Checkpoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Pending,
    Dropped,
    Consumed,
    Kept,
}

/// Rotates the relator so the unique occurrence of `g` comes first and
/// solves for `g`.
fn solve_for(relator: &Word, g: usize) -> Word {
    let letters = relator.letters();
    let pos = letters.iter().position(|l| l.gen == g).expect("generator occurs in relator");
    let rest: Word = letters[pos + 1..].iter().chain(&letters[..pos]).copied().collect();
    if letters[pos].inverse {
        rest.free_reduce()
    } else {
        rest.inverse().free_reduce()
    }
}

impl<'a> Engine<'a> {
    fn new(num_gens: usize, orig: &'a [Relation], opts: &SimplifyOptions) -> Self {
        Engine {
            orig,
            images: (0..num_gens).map(Word::gen).collect(),
            alive: vec![true; num_gens],
            status: vec![Status::Pending; orig.len()],
            steps: Vec::new(),
            phase: String::new(),
            checkpoint_every: opts.checkpoint_every,
            max_cosets: opts.max_cosets,
            checkpoints: Vec::new(),
        }
    }

    fn unreduced(&self, r: usize) -> Word {
        let im = |x: usize| self.images[x].clone();
        let rel = &self.orig[r];
        rel.lhs.substitute(im).concat(&rel.rhs.substitute(im).inverse())
    }

    fn current(&self, r: usize) -> Word {
        self.unreduced(r).cyclic_reduce()
    }

    fn sizes(&self) -> (usize, usize) {
        let g = self.alive.iter().filter(|&&a| a).count();
        let r = self.status.iter().filter(|s| matches!(s, Status::Pending | Status::Kept)).count();
        (g, r)
    }

    fn record(&mut self, kind: StepKind, before: (usize, usize)) {
        let after = self.sizes();
        self.steps.push(TraceStep {
            phase: self.phase.clone(),
            kind,
            generators_before: before.0,
            generators_after: after.0,
            relations_before: before.1,
            relations_after: after.1,
        });
        if let Some(every) = self.checkpoint_every {
            if every > 0 && self.steps.len().is_multiple_of(every) {
                let order = self.current_presentation().and_then(|p| todd_coxeter(&p, self.max_cosets).ok()).map(|t| t.n);
                self.checkpoints.push(Checkpoint { step: self.steps.len(), order });
            }
        }
    }

    /// The presentation on the live generators with every pending or kept
    /// relation.
    fn current_presentation(&self) -> Option<GroupPresentation> {
        let live: Vec<usize> = (0..self.alive.len()).filter(|&g| self.alive[g]).collect();
        let mut index = vec![usize::MAX; self.alive.len()];
        for (k, &g) in live.iter().enumerate() {
            index[g] = k;
        }
        let relations = (0..self.orig.len())
            .filter(|&r| matches!(self.status[r], Status::Pending | Status::Kept))
            .map(|r| Relation::new(self.current(r).map_gens(|g| index[g]), Word::empty()))
            .collect();
        let names: Vec<String> = live.iter().map(|g| format!("x{g}")).collect();
        GroupPresentation::from_names(&names, relations).ok()
    }

    fn drop_trivial(&mut self, r: usize) {
        let before = self.sizes();
        self.status[r] = Status::Dropped;
        self.record(StepKind::RemoveTrivialRelator { relation: r }, before);
    }

    fn eliminate(&mut self, g: usize, word: Word, r: usize) {
        let before = self.sizes();
        for im in &mut self.images {
            if im.contains_gen(g) {
                *im = im.substitute(|x| if x == g { word.clone() } else { Word::gen(x) }).free_reduce();
            }
        }
        self.alive[g] = false;
        self.status[r] = Status::Consumed;
        self.record(StepKind::Eliminate { gen: g, word, relation: r }, before);
    }

    fn keep(&mut self, r: usize) {
        let before = self.sizes();
        self.status[r] = Status::Kept;
        self.record(StepKind::Keep { relation: r }, before);
    }

    /// Greedy: repeatedly eliminate the generator with the shortest
    /// defining word below `max_len`, ties by generator then relation.
    fn run_greedy(&mut self, max_len: usize) {
        self.phase = "greedy".into();
        let changed = (0..self.orig.len()).filter(|&r| self.current(r) != self.orig[r].relator()).count();
        if changed > 0 {
            let s = self.sizes();
            self.record(StepKind::FreeReduce { changed }, s);
        }
        loop {
            for r in 0..self.orig.len() {
                if self.status[r] == Status::Pending && self.current(r).is_empty() {
                    self.drop_trivial(r);
                }
            }
            let mut best: Option<(usize, usize, usize)> = None;
            for r in 0..self.orig.len() {
                if self.status[r] != Status::Pending {
                    continue;
                }
                let rel = self.current(r);
                if rel.len() > max_len {
                    continue;
                }
                for g in 0..self.alive.len() {
                    if self.alive[g] && rel.occurrences(g) == 1 {
                        let cand = (rel.len() - 1, g, r);
                        if best.is_none_or(|b| cand < b) {
                            best = Some(cand);
                        }
                    }
                }
            }
            let Some((_, g, r)) = best else { break };
            let word = solve_for(&self.current(r), g);
            self.eliminate(g, word, r);
        }
        for r in 0..self.orig.len() {
            if self.status[r] == Status::Pending {
                self.keep(r);
            }
        }
    }
}

fn greedy_output(engine: &Engine, names: &[String]) -> (GroupPresentation, Vec<usize>, Vec<Word>) {
    let survivors: Vec<usize> = (0..engine.alive.len()).filter(|&g| engine.alive[g]).collect();
    let mut index = vec![usize::MAX; engine.alive.len()];
    for (k, &g) in survivors.iter().enumerate() {
        index[g] = k;
    }
    let relations = (0..engine.orig.len())
        .filter(|&r| engine.status[r] == Status::Kept)
        .map(|r| Relation::new(engine.current(r).map_gens(|g| index[g]), Word::empty()))
        .collect();
    let generators = survivors.iter().map(|&g| GenSymbol::user(names[g].clone())).collect();
    let substitution = engine.images.iter().map(|w| w.map_gens(|g| index[g])).collect();
    (GroupPresentation { generators, relations }, survivors, substitution)
}

/// Greedy simplification of an arbitrary presentation.
pub fn simplify_group(p: &GroupPresentation, opts: &SimplifyOptions) -> (GroupPresentation, SimplificationTrace) {
    let names = p.names();
    let initial_order = initial_order(p, opts);
    let mut engine = Engine::new(p.num_generators(), &p.relations, opts);
    engine.run_greedy(opts.max_defining_len);
    let (out, survivors, substitution) = greedy_output(&engine, &names);
    let trace = SimplificationTrace {
        strategy: Strategy::Greedy,
        steps: engine.steps,
        substitution,
        output_names: survivors.iter().map(|&g| names[g].clone()).collect(),
        survivors,
        original_names: names,
        renamed: false,
        snapshots: Vec::new(),
        initial_order,
        checkpoints: engine.checkpoints,
        warnings: Vec::new(),
    };
    (out, trace)
}

fn initial_order(p: &GroupPresentation, opts: &SimplifyOptions) -> Option<usize> {
    opts.checkpoint_every?;
    todd_coxeter(p, opts.max_cosets).ok().map(|t| t.n)
}

const PHASES: [&str; 6] = ["(1)", "U/D", "L/R: Z", "L/R: G", "L/R: Gbar", "L/R: R"];

fn phase_of(p: &IgPresentation, labels: &[ElementLabel], r: usize) -> Option<usize> {
    match &p.relations[r].source {
        RelationSource::BaseColumn { .. } | RelationSource::BaseRow { .. } => Some(0),
        RelationSource::Square { kinds, witnesses, .. } => {
            if kinds.contains(&SquareKind::LeftRight) {
                let w = witnesses.iter().find(|&&w| !labels.get(w).is_some_and(|l| l.is_k()))?;
                match labels.get(*w)? {
                    ElementLabel::Z => Some(2),
                    ElementLabel::G { .. } => Some(3),
                    ElementLabel::Gbar { .. } => Some(4),
                    ElementLabel::R { .. } => Some(5),
                    ElementLabel::K { .. } => None,
                }
            } else {
                Some(1)
            }
        }
    }
}

/// Whether `p` has the grid shape of a `B_G` presentation over `n`
/// generators with base cell `(0, 0)`.
fn bg_shaped(p: &IgPresentation, n: usize) -> bool {
    p.nrows == 2 * n + 2 && p.ncols == n + 2 && p.base == (0, 0)
}

/// Simplifies a maximal-subgroup presentation. `Strategy::Paper` replays
/// the elimination order of the `B_G` proof and falls back to greedy (with
/// a warning) when `p` does not come from a `B_G`.
pub fn simplify(p: &IgPresentation, opts: &SimplifyOptions) -> (GroupPresentation, SimplificationTrace) {
    let gp = p.to_group_presentation();
    let mut warnings = Vec::new();
    if opts.strategy == Strategy::Paper {
        match &p.bg {
            Some(bg) if bg_shaped(p, bg.gen_names.len()) => match simplify_paper(p, &gp, &bg.gen_names, &bg.labels, opts) {
                Ok(res) => return res,
                Err(w) => warnings.push(w),
            },
            _ => warnings.push("paper strategy needs a B_G presentation; using greedy".to_string()),
        }
    }
    let (out, mut trace) = simplify_group(&gp, opts);
    trace.warnings.extend(warnings);
    (out, trace)
}

fn simplify_paper(
    p: &IgPresentation,
    gp: &GroupPresentation,
    gen_names: &[String],
    labels: &[ElementLabel],
    opts: &SimplifyOptions,
) -> Result<(GroupPresentation, SimplificationTrace), String> {
    let n = gen_names.len();
    let mut phases = Vec::with_capacity(p.relations.len());
    for r in 0..p.relations.len() {
        phases.push(phase_of(p, labels, r).ok_or_else(|| format!("relation {r} has no recognisable witness; using greedy"))?);
    }
    let initial_order = initial_order(gp, opts);
    let mut engine = Engine::new(gp.num_generators(), &gp.relations, opts);
    let mut snapshots = Vec::new();
    let mut warnings = Vec::new();

    for (ph, name) in PHASES.iter().enumerate().take(5) {
        engine.phase = name.to_string();
        let mut deferred = Vec::new();
        for r in (0..p.relations.len()).filter(|&r| phases[r] == ph) {
            if !paper_step(&mut engine, p, r) {
                deferred.push(r);
            }
        }
        while !deferred.is_empty() {
            let before = deferred.len();
            deferred.retain(|&r| !paper_step(&mut engine, p, r));
            if deferred.len() == before {
                break;
            }
        }
        for r in deferred {
            warnings.push(format!("relation {r} in phase {name} could not be used for elimination"));
            engine.keep(r);
        }
        snapshots.push(PhaseSnapshot { phase: name.to_string(), images: engine.images.clone() });
    }

    let survivors: Vec<usize> = (0..engine.alive.len()).filter(|&g| engine.alive[g]).collect();
    let expected: Vec<usize> = (0..n).map(|a| p.gen_index(n + 1, 1 + a)).collect();
    if survivors != expected {
        return Err("survivors are not the f(0',a); using greedy".to_string());
    }
    let mut index = vec![usize::MAX; engine.alive.len()];
    for (k, &g) in survivors.iter().enumerate() {
        index[g] = k;
    }

    engine.phase = PHASES[5].to_string();
    let mut relations = Vec::new();
    for (r, &phase) in phases.iter().enumerate() {
        let last_phase = phase == 5;
        if !(last_phase || engine.status[r] == Status::Kept) {
            continue;
        }
        // one output relation per R witness, ordered like the input relations
        let keys: Vec<usize> = match &p.relations[r].source {
            RelationSource::Square { witnesses, .. } if last_phase => witnesses
                .iter()
                .filter_map(|&w| match labels.get(w) {
                    Some(ElementLabel::R { relation, .. }) => Some(*relation),
                    _ => None,
                })
                .collect(),
            _ => Vec::new(),
        };
        let keys = if keys.is_empty() { vec![usize::MAX] } else { keys };
        let unreduced = engine.unreduced(r).map_gens(|g| index[g]);
        let rel = match cayley_triple(&unreduced) {
            Some(rel) if last_phase => rel,
            _ => {
                let w = unreduced.cyclic_reduce();
                if w.is_empty() {
                    if engine.status[r] == Status::Pending {
                        engine.drop_trivial(r);
                    }
                    continue;
                }
                warnings.push(format!("relation {r} does not reduce to the form ab=c"));
                Relation::new(w, Word::empty())
            }
        };
        if engine.status[r] == Status::Pending {
            engine.keep(r);
        }
        for k in keys {
            relations.push((k, rel.clone()));
        }
    }
    relations.sort_by_key(|(k, _)| *k);
    let relations: Vec<Relation> = relations.into_iter().map(|(_, rel)| rel).collect();

    let original_names = p.display_names();
    let output_names: Vec<String> = gen_names.to_vec();
    let generators = output_names.iter().map(|s| GenSymbol::user(s.clone())).collect();
    snapshots.push(PhaseSnapshot { phase: PHASES[5].to_string(), images: engine.images.clone() });
    let substitution = engine.images.iter().map(|w| w.map_gens(|g| index[g])).collect();
    let trace = SimplificationTrace {
        strategy: Strategy::Paper,
        steps: engine.steps,
        substitution,
        survivors,
        original_names,
        output_names,
        renamed: true,
        snapshots,
        initial_order,
        checkpoints: engine.checkpoints,
        warnings,
    };
    Ok((GroupPresentation { generators, relations }, trace))
}

/// One attempt at using relation `r`: drop it if trivial, otherwise
/// eliminate the single-occurrence generator furthest right (then lowest)
/// in the grid. Returns false if neither applies.
fn paper_step(engine: &mut Engine, p: &IgPresentation, r: usize) -> bool {
    let rel = engine.current(r);
    if rel.is_empty() {
        engine.drop_trivial(r);
        return true;
    }
    let pick = (0..engine.alive.len()).filter(|&g| engine.alive[g] && rel.occurrences(g) == 1).max_by_key(|&g| {
        let (row, col) = p.gen_cell(g);
        (col, row)
    });
    match pick {
        Some(g) => {
            let word = solve_for(&rel, g);
            engine.eliminate(g, word, r);
            true
        }
        None => false,
    }
}

/// Reads an unreduced three-letter relator with one inverse letter,
/// `x y z^-1` up to rotation, as `x y = z`.
fn cayley_triple(w: &Word) -> Option<Relation> {
    let l = w.letters();
    if l.len() != 3 || l.iter().filter(|x| x.inverse).count() != 1 {
        return None;
    }
    let inv = l.iter().position(|x| x.inverse)?;
    let x = l[(inv + 1) % 3];
    let y = l[(inv + 2) % 3];
    Some(Relation::new(Word::from_letters(vec![x, y]), Word::from_letters(vec![l[inv].inv()])))
}

/// The final `I x J` table of images `a_ij` over the output generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridTable {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub names: Vec<String>,
    pub entries: Vec<Vec<Word>>,
}

pub fn grid_table(p: &IgPresentation, trace: &SimplificationTrace) -> GridTable {
    let entries = (0..p.nrows).map(|i| (0..p.ncols).map(|j| trace.substitution[p.gen_index(i, j)].free_reduce()).collect()).collect();
    GridTable { row_labels: p.row_labels.clone(), col_labels: p.col_labels.clone(), names: trace.output_names.clone(), entries }
}

/// Renders a labelled grid of strings. Each column is left-aligned to its
/// widest cell, columns are separated by two spaces and trailing spaces
/// are trimmed. The first line holds the column labels.
pub fn render_grid(row_labels: &[String], col_labels: &[String], cells: &[Vec<String>]) -> String {
    let mut rows: Vec<Vec<String>> = Vec::with_capacity(cells.len() + 1);
    rows.push(std::iter::once(String::new()).chain(col_labels.iter().cloned()).collect());
    for (label, row) in row_labels.iter().zip(cells) {
        rows.push(std::iter::once(label.clone()).chain(row.iter().cloned()).collect());
    }
    let ncols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..ncols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r.iter().enumerate().map(|(c, s)| format!("{s:<w$}", w = widths[c])).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

impl GridTable {
    pub fn get(&self, i: usize, j: usize) -> &Word {
        &self.entries[i][j]
    }

    pub fn cell_strings(&self) -> Vec<Vec<String>> {
        self.entries.iter().map(|row| row.iter().map(|w| w.render(&self.names)).collect()).collect()
    }

    /// Aligned text with the identity printed as `1`.
    pub fn render(&self) -> String {
        render_grid(&self.row_labels, &self.col_labels, &self.cell_strings())
    }
}

/// Renders a phase snapshot as a grid; generators that are still present
/// appear under their own names.
pub fn render_snapshot(p: &IgPresentation, trace: &SimplificationTrace, snap: &PhaseSnapshot) -> String {
    let names = trace.snapshot_names();
    let cells: Vec<Vec<String>> =
        (0..p.nrows).map(|i| (0..p.ncols).map(|j| snap.images[p.gen_index(i, j)].free_reduce().render(&names)).collect()).collect();
    render_grid(&p.row_labels, &p.col_labels, &cells)
}

/// `lhs = rhs` in the presentation grammar.
pub fn render_relation(rel: &Relation, names: &[String]) -> String {
    format!("{} = {}", rel.lhs.render(names), rel.rhs.render(names))
}
