//! End-to-end run: parse, convert to Cayley form, build `B_G`, find the
//! singular squares, present the maximal subgroup, simplify it, verify the
//! result against the input and build the Rees model.

use serde::Serialize;
use thiserror::Error;

use crate::band::{build_bg, green_classes, BgBand, DClassGrid, GreenStructure, IndexBase, IndexSets};
use crate::group::{todd_coxeter, verify_theorem, GroupOracle, TheoremReport, Verdict, DEFAULT_MAX_COSETS};
use crate::ig::{is_basic_pair, IgPresentation};
use crate::presentations::{parse_group_presentation, to_cayley_form, CayleyConversion, GroupPresentation, Word};
use crate::rees::{build_rees_model, ReesModel};
use crate::squares::{singular_squares, SingularSquare, SquareKind};
use crate::tietze::{grid_table, render_relation, simplify, GridTable, SimplificationTrace, SimplifyOptions, Strategy};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{stage}: {message}")]
pub struct StageError {
    pub stage: &'static str,
    pub message: String,
}

fn stage<E: std::fmt::Display>(stage: &'static str) -> impl Fn(E) -> StageError {
    move |e| StageError { stage, message: e.to_string() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineOptions {
    pub strategy: Strategy,
    pub max_cosets: usize,
    /// `None` enables order checkpoints when the Cayley form has at most
    /// four generators.
    pub checkpoints: Option<bool>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { strategy: Strategy::Paper, max_cosets: DEFAULT_MAX_COSETS, checkpoints: None }
    }
}

/// The entry `a_ij` of the final grid table of a `B_G`, over the Cayley-form
/// generators: in unprimed rows only `(a, inf)` is nontrivial and equals
/// `a`; a primed row reads `c` in column `c` and, in column `inf`, the
/// generator it is named after (`1` for `0'`).
pub fn bg_table_entry(idx: &IndexSets, i: usize, j: usize) -> Word {
    let (r, c) = (idx.rows[i], idx.cols[j]);
    match (r.primed, r.base, c.base) {
        (false, IndexBase::Gen(a), IndexBase::Infinity) => Word::gen(a),
        (false, _, _) => Word::empty(),
        (true, _, IndexBase::Gen(g)) => Word::gen(g),
        (true, IndexBase::Gen(a), IndexBase::Infinity) => Word::gen(a),
        (true, _, _) => Word::empty(),
    }
}

/// Every intermediate object of a run.
pub struct Pipeline {
    pub input: GroupPresentation,
    pub conversion: CayleyConversion,
    pub bg: BgBand,
    pub green: GreenStructure,
    pub grid: DClassGrid,
    pub squares: Vec<SingularSquare>,
    pub presentation: IgPresentation,
    pub simplified: GroupPresentation,
    pub trace: SimplificationTrace,
    pub table: GridTable,
    pub theorem: TheoremReport,
    pub cayley_order: Verdict,
    pub unsimplified_order: Verdict,
    pub checkpoints: Verdict,
    pub rees: ReesModel,
    pub options: PipelineOptions,
}

impl Pipeline {
    pub fn run(text: &str, options: PipelineOptions) -> Result<Pipeline, StageError> {
        let input = parse_group_presentation(text).map_err(stage("parse"))?;
        Self::from_presentation(input, options)
    }

    pub fn from_presentation(input: GroupPresentation, options: PipelineOptions) -> Result<Pipeline, StageError> {
        let conversion = to_cayley_form(&input);
        let cayley = &conversion.presentation;
        let bg = build_bg(cayley).map_err(stage("build_bg"))?;
        let green = green_classes(bg.band());
        let grid = bg.k_grid(&green).map_err(stage("dclass_grid"))?;
        let squares = singular_squares(bg.band(), &green, &grid).map_err(stage("singular_squares"))?;
        let presentation = bg.maximal_subgroup_presentation(&grid, &squares).map_err(stage("maximal_subgroup_presentation"))?;

        let n = cayley.num_generators();
        let checkpoints_on = options.checkpoints.unwrap_or(n <= 4);
        let opts =
            SimplifyOptions::new(options.strategy).with_checkpoints(checkpoints_on.then_some(10)).with_max_cosets(options.max_cosets);
        let (simplified, trace) = simplify(&presentation, &opts);
        let table = grid_table(&presentation, &trace);

        let idx = bg.index_sets();
        let forward: Vec<Word> =
            (0..n).map(|a| trace.substitution[presentation.gen_index(idx.zero_prime_row(), idx.gen_col(a))].clone()).collect();
        let backward: Vec<Word> = trace
            .survivors
            .iter()
            .map(|&g| {
                let (i, j) = presentation.gen_cell(g);
                bg_table_entry(idx, i, j)
            })
            .collect();
        let theorem = verify_theorem(cayley, &simplified, &forward, &backward, trace.strategy == Strategy::Paper, options.max_cosets);

        let input_order = todd_coxeter(&input, options.max_cosets).ok().map(|t| t.n);
        let cayley_order = match (input_order, theorem.input_order) {
            (Some(a), Some(b)) if a == b => Verdict::Pass,
            (Some(a), Some(b)) => Verdict::Fail(format!("input order {a}, Cayley form order {b}")),
            _ => Verdict::Unknown(format!("enumeration did not finish within {} cosets", options.max_cosets)),
        };
        let unsimplified_order = match (trace.initial_order, theorem.input_order) {
            (Some(a), Some(b)) if a == b => Verdict::Pass,
            (Some(a), Some(b)) => Verdict::Fail(format!("maximal subgroup presentation has order {a}, input {b}")),
            (None, _) if !checkpoints_on => Verdict::Skipped("checkpoints disabled".into()),
            _ => Verdict::Unknown(format!("enumeration did not finish within {} cosets", options.max_cosets)),
        };
        let checkpoints = if !checkpoints_on {
            Verdict::Skipped("checkpoints disabled".into())
        } else if let Some(c) = trace.failed_checkpoints().first() {
            Verdict::Fail(format!("order {:?} at step {}", c.order, c.step))
        } else if trace.checkpoints.iter().any(|c| c.order.is_none()) || trace.initial_order.is_none() {
            Verdict::Unknown("some checkpoints did not enumerate".into())
        } else {
            Verdict::Pass
        };

        let oracle = GroupOracle::for_presentation(&simplified, options.max_cosets);
        let rees = build_rees_model(&table, oracle, &bg, &grid).map_err(stage("build_rees_model"))?;

        Ok(Pipeline {
            input,
            conversion,
            bg,
            green,
            grid,
            squares,
            presentation,
            simplified,
            trace,
            table,
            theorem,
            cayley_order,
            unsimplified_order,
            checkpoints,
            rees,
            options,
        })
    }

    pub fn square_count(&self, kind: SquareKind) -> usize {
        self.squares.iter().filter(|s| s.kind == kind).count()
    }

    pub fn verdicts(&self) -> Vec<(&'static str, &Verdict)> {
        vec![
            ("relation multiset", &self.theorem.relation_multiset),
            ("forward homomorphism", &self.theorem.forward_homomorphism),
            ("backward homomorphism", &self.theorem.backward_homomorphism),
            ("orders", &self.theorem.orders),
            ("cayley conversion order", &self.cayley_order),
            ("unsimplified order", &self.unsimplified_order),
            ("checkpoints", &self.checkpoints),
        ]
    }

    pub fn any_fail(&self) -> bool {
        self.verdicts().iter().any(|(_, v)| v.is_fail())
    }

    pub fn any_unknown(&self) -> bool {
        self.verdicts().iter().any(|(_, v)| v.is_unknown())
    }

    /// Checks `ι(e)ι(f) = ι(ef)` on every basic pair of `K` (finite mode).
    pub fn rees_basic_pairs(&self) -> Verdict {
        if !self.rees.group.is_finite() {
            return Verdict::Skipped("group is not enumerated".into());
        }
        let b = self.bg.band();
        let k = self.bg.k_len();
        for e in 0..k {
            for f in 0..k {
                if !is_basic_pair(b, e, f) {
                    continue;
                }
                let lhs = self.rees.multiply(&self.rees.embed_idempotent(e).unwrap(), &self.rees.embed_idempotent(f).unwrap());
                if lhs != self.rees.embed_idempotent(b.mul(e, f)).unwrap() {
                    return Verdict::Fail(format!("basic pair ({}, {})", b.name(e), b.name(f)));
                }
            }
        }
        Verdict::Pass
    }

    /// Size of the H-class of `e_{0,0}` under Rees multiplication.
    pub fn base_h_class_order(&self) -> Option<usize> {
        let h = self.rees.h_class(0, 0)?;
        let closed = h.iter().all(|x| h.iter().all(|y| h.contains(&self.rees.multiply(x, y))));
        closed.then_some(h.len())
    }

    pub fn report(&self) -> PipelineReport {
        let cayley = &self.conversion.presentation;
        let names = self.simplified.names();
        let idx = self.bg.index_sets();
        PipelineReport {
            schema: SCHEMA_VERSION,
            input: self.input.to_text(),
            cayley: CayleySummary {
                already_cayley: self.conversion.already_cayley,
                generators: cayley.names(),
                relations: cayley
                    .relations
                    .iter()
                    .map(|r| {
                        let (a, b, c) = cayley.triple_names(r);
                        format!("{a}*{b} = {c}")
                    })
                    .collect(),
            },
            band: BandSummary {
                size: self.bg.len(),
                formula: self.bg.formula_size(),
                formula_check: if self.bg.len() == self.bg.formula_size() { "pass" } else { "fail" }.to_string(),
                k_size: self.bg.k_len(),
                l_size: self.bg.len() - self.bg.k_len(),
                grid: [self.grid.nrows(), self.grid.ncols()],
                d_classes: self.green.num_d_classes(),
                gen_names: idx.gen_names().to_vec(),
            },
            squares: SquareSummary { left_right: self.square_count(SquareKind::LeftRight), up_down: self.square_count(SquareKind::UpDown) },
            presentation: PresentationSummary {
                generators: self.presentation.generators.len(),
                line1_relations: self.presentation.line1_count(),
                line2_relations: self.presentation.line2_count(),
            },
            trace: TraceSummary {
                strategy: self.trace.strategy,
                steps: self.trace.steps.len(),
                eliminations: self.trace.eliminations(),
                survivors: self.trace.survivors.iter().map(|&g| self.presentation.display_name(g)).collect(),
                renamed: self.trace.renamed,
                checkpoints: self.trace.checkpoints.len(),
                warnings: self.trace.warnings.clone(),
            },
            final_presentation: FinalPresentation {
                generators: names.clone(),
                relations: self.simplified.relations.iter().map(|r| render_relation(r, &names)).collect(),
            },
            grid_table: self.table.render().lines().map(str::to_string).collect(),
            verification: Verification {
                theorem: self.theorem.clone(),
                cayley_order: self.cayley_order.clone(),
                unsimplified_order: self.unsimplified_order.clone(),
                checkpoints: self.checkpoints.clone(),
            },
            rees: ReesSummary {
                mode: if self.rees.group.is_finite() { "finite" } else { "symbolic" }.to_string(),
                group_order: self.rees.group.order(),
                rows: self.rees.nrows(),
                cols: self.rees.ncols(),
                idempotent_cells: self.rees.nrows() * self.rees.ncols(),
                basic_pairs: self.rees_basic_pairs(),
                base_h_class_order: self.base_h_class_order(),
            },
            notes: self.notes(),
        }
    }

    fn notes(&self) -> Vec<String> {
        let mut notes = vec![
            "IG(B_G) coincides with RIG(B_G); nothing separate is computed for RIG".to_string(),
            "singular squares use witnesses strictly above the D-class of K".to_string(),
        ];
        if !self.conversion.already_cayley {
            notes.push(
                "Cayley form: identity u, inverse generators g_inv and chain generators d<k>_<r>; this is one valid conversion among many"
                    .to_string(),
            );
        }
        notes
    }
}

pub fn run_pipeline(text: &str, options: PipelineOptions) -> Result<PipelineReport, StageError> {
    Ok(Pipeline::run(text, options)?.report())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CayleySummary {
    pub already_cayley: bool,
    pub generators: Vec<String>,
    pub relations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BandSummary {
    pub size: usize,
    pub formula: usize,
    pub formula_check: String,
    pub k_size: usize,
    pub l_size: usize,
    pub grid: [usize; 2],
    pub d_classes: usize,
    pub gen_names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareSummary {
    pub left_right: usize,
    pub up_down: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PresentationSummary {
    pub generators: usize,
    pub line1_relations: usize,
    pub line2_relations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceSummary {
    pub strategy: Strategy,
    pub steps: usize,
    pub eliminations: usize,
    pub survivors: Vec<String>,
    pub renamed: bool,
    pub checkpoints: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FinalPresentation {
    pub generators: Vec<String>,
    pub relations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub theorem: TheoremReport,
    pub cayley_order: Verdict,
    pub unsimplified_order: Verdict,
    pub checkpoints: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReesSummary {
    pub mode: String,
    pub group_order: Option<usize>,
    pub rows: usize,
    pub cols: usize,
    pub idempotent_cells: usize,
    pub basic_pairs: Verdict,
    pub base_h_class_order: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PipelineReport {
    pub schema: u32,
    pub input: String,
    pub cayley: CayleySummary,
    pub band: BandSummary,
    pub squares: SquareSummary,
    pub presentation: PresentationSummary,
    pub trace: TraceSummary,
    pub final_presentation: FinalPresentation,
    pub grid_table: Vec<String>,
    pub verification: Verification,
    pub rees: ReesSummary,
    pub notes: Vec<String>,
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Pass => "pass".to_string(),
        Verdict::Fail(m) => format!("FAIL ({m})"),
        Verdict::Unknown(m) => format!("unknown ({m})"),
        Verdict::Skipped(m) => format!("skipped ({m})"),
    }
}

impl PipelineReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line("input:".into());
        for l in self.input.lines() {
            line(format!("  {l}"));
        }
        line(format!(
            "cayley form: {} generators, {} relations{}",
            self.cayley.generators.len(),
            self.cayley.relations.len(),
            if self.cayley.already_cayley { " (input already in Cayley form)" } else { "" }
        ));
        line(format!(
            "|B_G| = {} (formula {}: {}), K = {} x {}, |L| = {}",
            self.band.size, self.band.formula, self.band.formula_check, self.band.grid[0], self.band.grid[1], self.band.l_size
        ));
        line(format!("singular squares: {} left-right, {} up-down", self.squares.left_right, self.squares.up_down));
        line(format!(
            "maximal subgroup presentation: {} generators, {} + {} relations",
            self.presentation.generators, self.presentation.line1_relations, self.presentation.line2_relations
        ));
        line(format!(
            "simplification ({}): {} steps, {} eliminations, survivors {}",
            self.trace.strategy,
            self.trace.steps,
            self.trace.eliminations,
            self.trace.survivors.join(" ")
        ));
        for w in &self.trace.warnings {
            line(format!("  warning: {w}"));
        }
        line(format!(
            "final presentation: < {} | {} >",
            self.final_presentation.generators.join(", "),
            self.final_presentation.relations.join(", ")
        ));
        line("grid table:".into());
        for l in &self.grid_table {
            line(format!("  {l}"));
        }
        let v = &self.verification;
        line("verification:".into());
        line(format!("  relation multiset: {}", verdict_text(&v.theorem.relation_multiset)));
        line(format!("  forward homomorphism: {}", verdict_text(&v.theorem.forward_homomorphism)));
        line(format!("  backward homomorphism: {}", verdict_text(&v.theorem.backward_homomorphism)));
        let order = |o: Option<usize>| o.map_or("?".to_string(), |n| n.to_string());
        line(format!(
            "  orders: {} ({} / {})",
            verdict_text(&v.theorem.orders),
            order(v.theorem.input_order),
            order(v.theorem.output_order)
        ));
        line(format!("  cayley conversion order: {}", verdict_text(&v.cayley_order)));
        line(format!("  unsimplified order: {}", verdict_text(&v.unsimplified_order)));
        line(format!("  checkpoints: {}", verdict_text(&v.checkpoints)));
        line(format!(
            "rees model: {} mode, {} x {}, group order {}, basic pairs {}, base H-class order {}",
            self.rees.mode,
            self.rees.rows,
            self.rees.cols,
            order(self.rees.group_order),
            verdict_text(&self.rees.basic_pairs),
            order(self.rees.base_h_class_order)
        ));
        for n in &self.notes {
            line(format!("note: {n}"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q8: &str = "gens a b c\nrel a*b=c\nrel b*c=a\nrel c*a=b\n";

    #[test]
    fn q8_report() {
        let p = Pipeline::run(Q8, PipelineOptions::default()).unwrap();
        assert!(!p.any_fail() && !p.any_unknown(), "{}", p.report().to_text());
        let r = p.report();
        assert_eq!(r.schema, 1);
        assert_eq!((r.band.size, r.band.formula_check.as_str()), (50, "pass"));
        assert_eq!(r.band.grid, [8, 5]);
        assert_eq!((r.squares.left_right, r.squares.up_down), (10, 72));
        assert_eq!(r.presentation.generators, 40);
        assert_eq!(r.final_presentation.relations, vec!["a*b = c", "b*c = a", "c*a = b"]);
        assert_eq!(r.rees.basic_pairs, Verdict::Pass);
        assert_eq!(r.rees.base_h_class_order, Some(8));
    }

    #[test]
    fn closed_form_matches_q8_table() {
        let p = Pipeline::run(Q8, PipelineOptions::default()).unwrap();
        let idx = p.bg.index_sets();
        for i in 0..p.grid.nrows() {
            for j in 0..p.grid.ncols() {
                assert_eq!(p.table.get(i, j), &bg_table_entry(idx, i, j));
            }
        }
    }

    #[test]
    fn trivial_group() {
        let p = Pipeline::run("gens a\nrel a*a=a", PipelineOptions::default()).unwrap();
        let r = p.report();
        assert_eq!(r.band.size, 16);
        assert_eq!((r.verification.theorem.input_order, r.verification.theorem.output_order), (Some(1), Some(1)));
    }

    #[test]
    fn non_cayley_input() {
        let p = Pipeline::run("gens r s\nrel r^3=1\nrel s^2=1\nrel r*s*r*s=1", PipelineOptions::default()).unwrap();
        assert!(!p.any_fail(), "{}", p.report().to_text());
        assert_eq!(p.theorem.output_order, Some(6));
    }

    #[test]
    fn malformed_input() {
        let err = Pipeline::run("gens a\nrel a*b=a", PipelineOptions::default()).err().unwrap();
        assert_eq!(err.stage, "parse");
    }

    #[test]
    fn greedy_pipeline() {
        let opts = PipelineOptions { strategy: Strategy::Greedy, ..PipelineOptions::default() };
        let p = Pipeline::run(Q8, opts).unwrap();
        assert!(matches!(p.theorem.relation_multiset, Verdict::Skipped(_)));
        assert!(!p.any_fail(), "{}", p.report().to_text());
        assert_eq!(p.theorem.output_order, Some(8));
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_pipeline(Q8, PipelineOptions::default()).unwrap().to_json();
        let b = run_pipeline(Q8, PipelineOptions::default()).unwrap().to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"schema\": 1"));
    }
}
