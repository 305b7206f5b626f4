use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use igband::band::{dclass_grid, green_classes, Band, DClassGrid, GreenStructure};
use igband::group::{Verdict, DEFAULT_MAX_COSETS};
use igband::ig::{maximal_subgroup_presentation, IgPresentation};
use igband::pipeline::{Pipeline, PipelineOptions, StageError, SCHEMA_VERSION};
use igband::presentations::{parse_group_presentation, to_cayley_form};
use igband::rees::parse_band_word;
use igband::squares::{singular_squares, SingularSquare};
use igband::tietze::{render_grid, render_relation, render_snapshot, simplify, SimplifyOptions, Strategy};

#[derive(Parser)]
#[command(name = "igband", version, about = "Maximal subgroups of free idempotent generated semigroups over B_G")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert the input presentation to Cayley form.
    Cayley(Common),
    /// Build B_G (or load a band with --table) and summarise it.
    Build(Common),
    /// List the singular squares of the grid.
    Squares(Common),
    /// Print the maximal-subgroup presentation.
    Present(Common),
    /// Simplify the maximal-subgroup presentation and print the grid table.
    Simplify(Common),
    /// Check that the maximal subgroup is the input group.
    Verify(Common),
    /// Print the Rees matrix model.
    Rees(Common),
    /// Normal form of a word over B_G, or an equality check of two words.
    Word {
        #[command(flatten)]
        common: Common,
        /// Letters such as `K(0,a) K(a',inf)` or `L(G:a)`.
        word: String,
        other: Option<String>,
    },
    /// Run every stage and print the full report.
    Pipeline(Common),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Paper,
    Greedy,
}

#[derive(Args)]
struct Common {
    /// Presentation file (`-` for stdin).
    #[arg(long, short)]
    input: Option<String>,
    /// Band given as a JSON multiplication table.
    #[arg(long)]
    table: Option<String>,
    /// Base idempotent of the grid for --table bands (default: least
    /// element of the first minimal D-class).
    #[arg(long)]
    base: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
    max_cosets: usize,
    #[arg(long, value_enum, default_value = "paper")]
    strategy: StrategyArg,
    /// Accept verdicts left unknown by coset-enumeration overflow.
    #[arg(long)]
    allow_unknown: bool,
    /// Disable the periodic order checks during simplification.
    #[arg(long)]
    no_checkpoints: bool,
}

impl Common {
    fn strategy(&self) -> Strategy {
        match self.strategy {
            StrategyArg::Paper => Strategy::Paper,
            StrategyArg::Greedy => Strategy::Greedy,
        }
    }

    fn options(&self) -> PipelineOptions {
        PipelineOptions {
            strategy: self.strategy(),
            max_cosets: self.max_cosets,
            checkpoints: if self.no_checkpoints { Some(false) } else { None },
        }
    }

    fn json(&self) -> bool {
        self.format == Format::Json
    }
}

enum Failure {
    Stage(StageError),
    Verdict,
    Unknown,
}

impl From<StageError> for Failure {
    fn from(e: StageError) -> Self {
        Failure::Stage(e)
    }
}

type Outcome = Result<(), Failure>;

fn err(stage: &'static str, message: impl ToString) -> Failure {
    Failure::Stage(StageError { stage, message: message.to_string() })
}

fn read_source(path: &Option<String>, what: &'static str) -> Result<String, Failure> {
    match path.as_deref() {
        None => Err(err(what, "no input given (use --input PATH)")),
        Some("-") => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| err(what, e))?;
            Ok(s)
        }
        Some(p) => fs::read_to_string(p).map_err(|e| err(what, format!("{p}: {e}"))),
    }
}

fn pipeline(c: &Common) -> Result<Pipeline, Failure> {
    let text = read_source(&c.input, "read")?;
    Ok(Pipeline::run(&text, c.options())?)
}

fn emit(c: &Common, text: String, value: serde_json::Value) {
    if c.json() {
        let mut value = value;
        if let Some(obj) = value.as_object_mut() {
            obj.insert("schema".into(), json!(SCHEMA_VERSION));
        }
        println!("{}", serde_json::to_string_pretty(&value).expect("json"));
    } else {
        print!("{text}");
    }
}

/// A band given by table, with its grid at the chosen base.
struct TableBand {
    band: Band,
    green: GreenStructure,
    grid: DClassGrid,
    base: usize,
}

fn table_band(c: &Common) -> Result<TableBand, Failure> {
    let text = read_source(&c.table, "read")?;
    let band = Band::from_json(&text).map_err(|e| err("load_band", e))?;
    if band.is_empty() {
        return Err(err("load_band", "empty band"));
    }
    let green = green_classes(&band);
    let base = match c.base {
        Some(b) => b,
        None => {
            let d = green.minimal_d_classes()[0];
            green.d_classes[d][0]
        }
    };
    if base >= band.len() {
        return Err(err("dclass_grid", format!("base {base} is not an element")));
    }
    let grid = dclass_grid(&band, &green, green.d_class_of(base), base).map_err(|e| err("dclass_grid", e))?;
    Ok(TableBand { band, green, grid, base })
}

fn cmd_cayley(c: &Common) -> Outcome {
    let text = read_source(&c.input, "read")?;
    let p = parse_group_presentation(&text).map_err(|e| err("parse", e))?;
    let conv = to_cayley_form(&p);
    let cp = &conv.presentation;
    let mut out = cp.to_text();
    if conv.already_cayley {
        out.push_str("# input was already in Cayley form\n");
    }
    let triples: Vec<_> = cp.relations.iter().map(|r| cp.triple_names(r)).collect();
    emit(
        c,
        out,
        json!({
            "already_cayley": conv.already_cayley,
            "generators": cp.names(),
            "relations": triples,
            "gen_map": conv.gen_map,
        }),
    );
    Ok(())
}

fn cmd_build(c: &Common) -> Outcome {
    if c.table.is_some() {
        let t = table_band(c)?;
        let mut out = format!("band of {} elements, {} D-classes\n", t.band.len(), t.green.num_d_classes());
        let mut classes = Vec::new();
        for (d, members) in t.green.d_classes.iter().enumerate() {
            let (r, l) = (t.green.r_classes_in(d).len(), t.green.l_classes_in(d).len());
            out.push_str(&format!("  D{d}: {r} x {l}, least element {}\n", t.band.name(members[0])));
            classes.push(json!({"rows": r, "cols": l, "elements": members}));
        }
        out.push_str(&format!("grid at base {}: {} x {}\n", t.band.name(t.base), t.grid.nrows(), t.grid.ncols()));
        emit(c, out, json!({"size": t.band.len(), "d_classes": classes, "grid": [t.grid.nrows(), t.grid.ncols()]}));
        return Ok(());
    }
    let p = pipeline(c)?;
    let r = p.report();
    let b = &r.band;
    let out = format!(
        "|B_G| = {} (formula {}: {})\nK: {} x {} ({} elements)\nL: {} elements\nD-classes: {}\n",
        b.size, b.formula, b.formula_check, b.grid[0], b.grid[1], b.k_size, b.l_size, b.d_classes
    );
    let mut value = serde_json::to_value(b).expect("json");
    value["elements"] = json!(p.bg.band().names());
    emit(c, out, value);
    Ok(())
}

fn squares_output(c: &Common, band: &Band, grid: &DClassGrid, squares: &[SingularSquare]) {
    let mut out = String::new();
    for s in squares {
        let w: Vec<&str> = s.witnesses.iter().map(|&x| band.name(x)).collect();
        out.push_str(&format!(
            "({}, {}; {}, {}) {:?} by {}\n",
            grid.row_labels[s.i],
            grid.row_labels[s.k],
            grid.col_labels[s.j],
            grid.col_labels[s.l],
            s.kind,
            w.join(" ")
        ));
    }
    emit(c, out, json!({"squares": squares, "rows": grid.row_labels, "cols": grid.col_labels}));
}

fn cmd_squares(c: &Common) -> Outcome {
    if c.table.is_some() {
        let t = table_band(c)?;
        let squares = singular_squares(&t.band, &t.green, &t.grid).map_err(|e| err("singular_squares", e))?;
        squares_output(c, &t.band, &t.grid, &squares);
        return Ok(());
    }
    let p = pipeline(c)?;
    squares_output(c, p.bg.band(), &p.grid, &p.squares);
    Ok(())
}

fn table_presentation(c: &Common) -> Result<IgPresentation, Failure> {
    let t = table_band(c)?;
    let squares = singular_squares(&t.band, &t.green, &t.grid).map_err(|e| err("singular_squares", e))?;
    maximal_subgroup_presentation(&t.grid, &squares, (0, 0)).map_err(|e| err("maximal_subgroup_presentation", e))
}

fn cmd_present(c: &Common) -> Outcome {
    let ig = if c.table.is_some() { table_presentation(c)? } else { pipeline(c)?.presentation };
    let gp = ig.to_group_presentation();
    let out = format!(
        "# {} generators, {} relations from the base row and column, {} from singular squares\n{}",
        ig.generators.len(),
        ig.line1_count(),
        ig.line2_count(),
        gp.to_text()
    );
    emit(c, out, json!({"presentation": ig, "text": gp.to_text()}));
    Ok(())
}

fn cmd_simplify(c: &Common) -> Outcome {
    if c.table.is_some() {
        let ig = table_presentation(c)?;
        let opts = SimplifyOptions::new(c.strategy()).with_max_cosets(c.max_cosets);
        let (out, trace) = simplify(&ig, &opts);
        let mut text = String::new();
        for w in &trace.warnings {
            text.push_str(&format!("# warning: {w}\n"));
        }
        text.push_str(&out.to_text());
        emit(c, text, json!({"presentation": out.to_text(), "trace": trace}));
        return Ok(());
    }
    let p = pipeline(c)?;
    let mut text = String::new();
    for snap in &p.trace.snapshots {
        text.push_str(&format!("after {}:\n", snap.phase));
        text.push_str(&render_snapshot(&p.presentation, &p.trace, snap));
        text.push('\n');
    }
    text.push_str("final table:\n");
    text.push_str(&p.table.render());
    text.push('\n');
    for w in &p.trace.warnings {
        text.push_str(&format!("warning: {w}\n"));
    }
    let names = p.simplified.names();
    text.push_str(&format!("final presentation ({}):\n", p.trace.strategy));
    text.push_str(&p.simplified.to_text());
    let rels: Vec<String> = p.simplified.relations.iter().map(|r| render_relation(r, &names)).collect();
    emit(c, text, json!({"trace": p.trace, "grid_table": p.table, "generators": names, "relations": rels}));
    Ok(())
}

fn verdict_outcome(c: &Common, p: &Pipeline) -> Outcome {
    if p.any_fail() || p.rees_basic_pairs().is_fail() {
        Err(Failure::Verdict)
    } else if p.any_unknown() && !c.allow_unknown {
        Err(Failure::Unknown)
    } else {
        Ok(())
    }
}

fn verdict_word(v: &Verdict) -> String {
    match v {
        Verdict::Pass => "pass".into(),
        Verdict::Fail(m) => format!("FAIL: {m}"),
        Verdict::Unknown(m) => format!("unknown: {m}"),
        Verdict::Skipped(m) => format!("skipped: {m}"),
    }
}

fn cmd_verify(c: &Common) -> Outcome {
    let p = pipeline(c)?;
    let mut out = String::new();
    for (name, v) in p.verdicts() {
        out.push_str(&format!("{name}: {}\n", verdict_word(v)));
    }
    let order = |o: Option<usize>| o.map_or("?".to_string(), |n| n.to_string());
    out.push_str(&format!("orders: {} / {}\n", order(p.theorem.input_order), order(p.theorem.output_order)));
    let r = p.report();
    emit(c, out, serde_json::to_value(&r.verification).expect("json"));
    verdict_outcome(c, &p)
}

fn cmd_rees(c: &Common) -> Outcome {
    let p = pipeline(c)?;
    let m = &p.rees;
    let names = m.group.generators();
    let cells: Vec<Vec<String>> = m.sandwich.iter().map(|row| row.iter().map(|w| w.render(names)).collect()).collect();
    let order = m.group.order().map_or("unknown".to_string(), |n| n.to_string());
    let mut out = format!(
        "structure group: {} mode, order {order}\nsandwich matrix p(j,i) (rows J, columns I):\n",
        if m.group.is_finite() { "finite" } else { "symbolic" }
    );
    out.push_str(&render_grid(&m.col_labels, &m.row_labels, &cells));
    out.push_str(&format!("basic pairs in K: {}\n", verdict_word(&p.rees_basic_pairs())));
    if let Some(h) = p.base_h_class_order() {
        out.push_str(&format!("H-class of e(0,0): order {h}\n"));
    }
    let r = p.report();
    emit(c, out, json!({"summary": r.rees, "sandwich": m.sandwich, "generators": names}));
    Ok(())
}

fn cmd_word(c: &Common, word: &str, other: &Option<String>) -> Outcome {
    let p = pipeline(c)?;
    let w1 = parse_band_word(&p.bg, word).map_err(|e| err("word", e))?;
    let nf = p.rees.ig_normal_form(&w1).map_err(|e| err("word", e))?;
    match other {
        None => {
            emit(c, format!("{}\n", p.rees.render(&nf)), json!({"normal_form": nf, "text": p.rees.render(&nf)}));
        }
        Some(o) => {
            let w2 = parse_band_word(&p.bg, o).map_err(|e| err("word", e))?;
            let nf2 = p.rees.ig_normal_form(&w2).map_err(|e| err("word", e))?;
            let eq = p.rees.ig_equal(&w1, &w2).map_err(|e| err("word", e))?;
            let text = format!("{}\n{}\n{}\n", p.rees.render(&nf), p.rees.render(&nf2), p.rees.render_equality(&eq));
            emit(c, text, json!({"left": nf, "right": nf2, "result": eq}));
        }
    }
    Ok(())
}

fn cmd_pipeline(c: &Common) -> Outcome {
    let p = pipeline(c)?;
    let r = p.report();
    if c.json() {
        println!("{}", r.to_json());
    } else {
        print!("{}", r.to_text());
    }
    verdict_outcome(c, &p)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Cayley(c) => cmd_cayley(c),
        Command::Build(c) => cmd_build(c),
        Command::Squares(c) => cmd_squares(c),
        Command::Present(c) => cmd_present(c),
        Command::Simplify(c) => cmd_simplify(c),
        Command::Verify(c) => cmd_verify(c),
        Command::Rees(c) => cmd_rees(c),
        Command::Word { common, word, other } => cmd_word(common, word, other),
        Command::Pipeline(c) => cmd_pipeline(c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verdict) => ExitCode::from(1),
        Err(Failure::Stage(e)) => {
            eprintln!("error in stage {}: {}", e.stage, e.message);
            ExitCode::from(2)
        }
        Err(Failure::Unknown) => {
            eprintln!("verification inconclusive (coset enumeration overflow); pass --allow-unknown to accept");
            ExitCode::from(3)
        }
    }
}
