//! Command-line interface: axiom checking, subcategory classification,
//! localized hom spaces, Grothendieck groups, conflation lifting, bundled
//! demonstrations, and quiver export.

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::axioms::{
    check_exact_axioms, check_subobject_closed, check_torsion_pair, classify_subcategory,
    describe_key, find_report, AxiomReport,
};
use crate::confcat::{Instance, ObjKey};
use crate::k0::{k0_quotient, k0_waldhausen};
use crate::localize::{
    check_admissible_properties, check_quotient_axioms, describe_weak_iso, enum_conflations,
    enum_weak_iso_sources, factors_through_quotient_epi, is_zero_in_quotient, lift_conflation,
    loc_hom_by_key, quotient_r3_witness, single_steps_into, LocHom, WeakIso,
};
use crate::quiverrep::RepMorphism;
use crate::specio::{corpus, corpus_names, load_instance};

#[derive(Parser)]
#[command(
    name = "defexact",
    version,
    about = "Workbench for finite deflation-exact categories over quiver representations"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for the deterministic sampling used by bounded checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Size bound: maximum number of indecomposable summands considered.
    #[arg(long, global = true, default_value_t = 5)]
    bound: usize,
    /// Depth bound for chains of elementary weak isomorphisms.
    #[arg(long, global = true, default_value_t = 3)]
    depth: usize,
    /// Work in the opposite category.
    #[arg(long, global = true)]
    op: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the exactness axioms at the size bound.
    Check {
        /// Path to a description file, or the name of a built-in instance.
        #[arg(long)]
        spec: String,
        /// Comma-separated axiom names to decide (e.g. R3,P2,A1); when given,
        /// classification and quotient properties are also available.
        #[arg(long, value_delimiter = ',')]
        axioms: Vec<String>,
    },
    /// Classify the distinguished subcategory against the percolation hierarchy.
    Classify {
        #[arg(long)]
        spec: String,
    },
    /// Dimension of a localized hom space between two objects.
    Lochom {
        #[arg(long)]
        spec: String,
        /// Source object, e.g. "S3" or "S2+P3^2".
        #[arg(long)]
        from: String,
        /// Target object, in the same syntax.
        #[arg(long)]
        to: String,
    },
    /// Grothendieck group in both presentations.
    K0 {
        #[arg(long)]
        spec: String,
    },
    /// Lift a conflation along a weak isomorphism into its middle object.
    Lift {
        #[arg(long)]
        spec: String,
        /// Index into the enumerated conflation table, or "list".
        #[arg(long)]
        conflation: String,
        /// Index into the enumerated weak-isomorphism steps into the middle
        /// object of the chosen conflation, or "list".
        #[arg(long)]
        weak: String,
    },
    /// Run a bundled demonstration (p3, p4, r3, torsion, serre).
    Demo { name: String },
    /// Print the underlying quiver in Graphviz DOT format.
    ExportDot {
        #[arg(long)]
        spec: String,
    },
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn load(cli: &Cli, spec: &str) -> Result<Instance, String> {
    let text = if std::path::Path::new(spec).is_file() {
        std::fs::read_to_string(spec).map_err(|e| format!("cannot read {spec}: {e}"))?
    } else if let Some(t) = corpus(spec) {
        t.to_string()
    } else {
        return Err(format!(
            "'{spec}' is neither a readable file nor a built-in instance (available: {})",
            corpus_names().join(", ")
        ));
    };
    let inst = load_instance(&text, cli.bound, cli.depth, cli.seed).map_err(|e| e.to_string())?;
    Ok(if cli.op { inst.opposite() } else { inst })
}

/// Parse an object expression such as "S3", "S2+P3" or "P2^2+S3".
fn parse_key(inst: &Instance, expr: &str) -> Result<ObjKey, String> {
    let mut key = ObjKey::new();
    for term in expr.split('+') {
        let term = term.trim();
        if term.is_empty() || term == "0" {
            continue;
        }
        let (name, mult) = match term.split_once('^') {
            Some((n, m)) => {
                (n.trim(), m.trim().parse::<usize>().map_err(|_| format!("bad multiplicity in '{term}'"))?)
            }
            None => (term, 1),
        };
        if inst.registry.get(name).is_none() {
            return Err(format!(
                "unknown indecomposable '{name}' (known: {})",
                inst.registry.names().join(", ")
            ));
        }
        *key.entry(name.to_string()).or_insert(0) += mult;
    }
    Ok(key)
}

fn print_reports(reports: &[AxiomReport], json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(reports).unwrap());
    } else {
        for r in reports {
            println!("{r}");
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32, String> {
    match &cli.command {
        Command::Check { spec, axioms } => {
            let inst = load(cli, spec)?;
            let mut reports = check_exact_axioms(&inst);
            if !axioms.is_empty() {
                // classification and quotient properties are decidable too
                reports.extend(classify_subcategory(&inst));
                reports.push(check_subobject_closed(&inst));
                let selected: Vec<AxiomReport> = axioms
                    .iter()
                    .map(|a| {
                        find_report(&reports, a)
                            .cloned()
                            .ok_or_else(|| format!("unknown axiom '{a}'"))
                    })
                    .collect::<Result<_, _>>()?;
                reports = selected;
            }
            print_reports(&reports, cli.json);
            Ok(if reports.iter().all(|r| r.holds) { 0 } else { 1 })
        }
        Command::Classify { spec } => {
            let inst = load(cli, spec)?;
            let mut reports = classify_subcategory(&inst);
            reports.push(check_subobject_closed(&inst));
            if inst.torsion.is_some() {
                reports.extend(check_torsion_pair(&inst));
            }
            print_reports(&reports, cli.json);
            Ok(0)
        }
        Command::Lochom { spec, from, to } => {
            let inst = load(cli, spec)?;
            let x = parse_key(&inst, from)?;
            let y = parse_key(&inst, to)?;
            let dim = loc_hom_by_key(&inst, &x, &y, cli.depth);
            if cli.json {
                println!(
                    "{}",
                    json!({ "from": from, "to": to, "depth": cli.depth, "dim": dim })
                );
            } else {
                println!(
                    "dim Hom({}, {}) = {dim} in the localization (depth {})",
                    describe_key(&x),
                    describe_key(&y),
                    cli.depth
                );
            }
            Ok(0)
        }
        Command::K0 { spec } => {
            let inst = load(cli, spec)?;
            let w = k0_waldhausen(&inst);
            let q = k0_quotient(&inst);
            let agree = w.free_rank == q.free_rank && w.invariant_factors == q.invariant_factors;
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "coWaldhausen": w, "quotient": q, "agree": agree
                    }))
                    .unwrap()
                );
            } else {
                for (label, r) in [("coWaldhausen", &w), ("quotient", &q)] {
                    println!(
                        "{label}: free rank {}, torsion factors {:?}, {} generators, {} relations",
                        r.free_rank,
                        r.invariant_factors,
                        r.generators.len(),
                        r.relation_count
                    );
                }
                println!("presentations {}", if agree { "agree" } else { "DISAGREE" });
            }
            Ok(if agree { 0 } else { 1 })
        }
        Command::Lift { spec, conflation, weak } => {
            let inst = load(cli, spec)?;
            let confs = enum_conflations(&inst, 2, 200);
            if conflation == "list" {
                for (i, c) in confs.iter().enumerate() {
                    println!(
                        "{i}: {} >-> {} ->> {}",
                        crate::axioms::describe_object(&inst, c.x()),
                        crate::axioms::describe_object(&inst, c.y()),
                        crate::axioms::describe_object(&inst, c.z())
                    );
                }
                return Ok(0);
            }
            let ci: usize = conflation
                .parse()
                .map_err(|_| format!("--conflation expects an index or 'list', got '{conflation}'"))?;
            let c = confs
                .get(ci)
                .ok_or_else(|| format!("conflation index {ci} out of range (0..{})", confs.len()))?;
            let steps = single_steps_into(&inst, c.y());
            if weak == "list" {
                for (i, s) in steps.iter().enumerate() {
                    println!("{i}: {}", describe_weak_iso(&inst, &WeakIso::single(s.clone())));
                }
                return Ok(0);
            }
            let wi: usize = weak
                .parse()
                .map_err(|_| format!("--weak expects an index or 'list', got '{weak}'"))?;
            let step = steps
                .get(wi)
                .ok_or_else(|| format!("weak index {wi} out of range (0..{})", steps.len()))?;
            let s = WeakIso::single(step.clone());
            match lift_conflation(&inst, c, &s) {
                Some(l) => {
                    let desc = |r| crate::axioms::describe_object(&inst, r);
                    if cli.json {
                        println!(
                            "{}",
                            json!({
                                "lifted": true,
                                "x": desc(l.conf.x()), "y": desc(l.conf.y()), "z": desc(l.conf.z()),
                                "is_conflation": inst.is_conflation(&l.conf),
                            })
                        );
                    } else {
                        println!(
                            "lifted conflation: {} >-> {} ->> {}",
                            desc(l.conf.x()),
                            desc(l.conf.y()),
                            desc(l.conf.z())
                        );
                        println!(
                            "weak isomorphism used: {}",
                            describe_weak_iso(&inst, &s)
                        );
                    }
                    Ok(0)
                }
                None => {
                    println!("no lift found for this conflation along this weak isomorphism");
                    Ok(1)
                }
            }
        }
        Command::Demo { name } => {
            let inst = load(cli, name)?;
            let facts = match name.as_str() {
                "p3" => demo_p3(&inst),
                "p4" => demo_p4(&inst),
                "r3" => demo_r3(&inst),
                "torsion" => demo_torsion(&inst),
                "serre" => demo_serre(&inst),
                other => return Err(format!("unknown demo '{other}' (p3, p4, r3, torsion, serre)")),
            };
            let all = facts.iter().all(|f| f.pass);
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&facts).unwrap());
            } else {
                for f in &facts {
                    println!("{}", f.line());
                }
                println!("demo {name}: {}", if all { "PASS" } else { "FAIL" });
            }
            Ok(if all { 0 } else { 1 })
        }
        Command::ExportDot { spec } => {
            let inst = load(cli, spec)?;
            println!("digraph {} {{", inst.name);
            println!("  rankdir=LR;");
            for v in &inst.quiver.vertices {
                println!("  \"{v}\";");
            }
            for a in &inst.quiver.arrows {
                println!(
                    "  \"{}\" -> \"{}\" [label=\"{}\"];",
                    inst.quiver.vertices[a.source], inst.quiver.vertices[a.target], a.name
                );
            }
            println!("}}");
            Ok(0)
        }
    }
}

// ---------------------------------------------------------------------------
// bundled demonstrations
// ---------------------------------------------------------------------------

#[derive(serde::Serialize)]
pub struct Fact {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Fact {
    fn new(name: &str, pass: bool, detail: String) -> Fact {
        Fact { name: name.to_string(), pass, detail }
    }

    pub fn line(&self) -> String {
        format!("[{}] {}: {}", if self.pass { " ok " } else { "FAIL" }, self.name, self.detail)
    }
}

fn key1(name: &str) -> ObjKey {
    [(name.to_string(), 1usize)].into_iter().collect()
}

fn basis1(inst: &Instance, x: &str, y: &str) -> RepMorphism {
    let xr = inst.realize(&key1(x));
    let yr = inst.realize(&key1(y));
    inst.hom(&xr, &yr)[0].clone()
}

fn axiom_facts(inst: &Instance, hold: &[&str], fail: &[&str]) -> Vec<Fact> {
    let reports = classify_subcategory(inst);
    let mut out = Vec::new();
    for n in hold {
        let r = find_report(&reports, n).unwrap();
        out.push(Fact::new(n, r.holds, "expected to hold at the bound".into()));
    }
    for n in fail {
        let r = find_report(&reports, n).unwrap();
        let w = r.witness.clone().unwrap_or_default();
        out.push(Fact::new(n, !r.holds, format!("expected to fail; witness: {w}")));
    }
    out
}

/// A subcategory satisfying every percolation axiom except pushout
/// completion, with the expected localized consequences.
pub fn demo_p3(inst: &Instance) -> Vec<Fact> {
    let mut facts = axiom_facts(inst, &["P1", "P2", "P4"], &["P3"]);
    // the failure witness involves the inflation P2 >-> P3
    if let Some(f) = facts.iter_mut().find(|f| f.name == "P3") {
        f.pass = f.pass && f.detail.contains("P2") && f.detail.contains("P3");
    }
    for d in [2usize, 3] {
        let dim = loc_hom_by_key(inst, &key1("S3"), &key1("I2"), d);
        facts.push(Fact::new(
            &format!("localized hom S3 -> I2 vanishes at depth {d}"),
            dim == 0,
            format!("dim = {dim}"),
        ));
    }
    // the descended image of P3 ->> S3 is epic but fails the cokernel
    // universal property: a map killing the inflation need not factor
    let i = basis1(inst, "P2", "P3");
    let p = basis1(inst, "P3", "S3");
    let t = basis1(inst, "P3", "I2");
    let kills = inst.factors_through_a(&t.compose(&i));
    let factors = factors_through_quotient_epi(inst, &p, &t, 3);
    facts.push(Fact::new(
        "descended P2 -> P3 -> S3 fails the cokernel universal property",
        kills && !factors,
        format!("t kills the inflation: {kills}; t factors through the deflation: {factors}"),
    ));
    facts
}

/// A subcategory satisfying every percolation axiom except descent of
/// obstructions, with a zero localized map admitting no honest factorization.
pub fn demo_p4(inst: &Instance) -> Vec<Fact> {
    let mut facts = axiom_facts(inst, &["P1", "P2", "P3"], &["P4"]);
    let f = basis1(inst, "tP2", "S3");
    let zero = is_zero_in_quotient(inst, &f, 3);
    let fta = inst.factors_through_a(&f);
    facts.push(Fact::new(
        "tP2 -> S3 is zero in the localization yet does not factor through A",
        zero && !fta,
        format!("zero in quotient: {zero}; factors through A: {fta}"),
    ));
    // every bounded weak-isomorphism source over S3 is S3 + P2^a + P3^b
    let s3 = inst.realize(&key1("S3"));
    let sources = enum_weak_iso_sources(inst, &s3, 3);
    let mut shape_ok = sources.len() > 1;
    let mut detail = format!("{} sources", sources.len());
    for s in &sources {
        match inst.key_of(s.source()) {
            Ok(k) => {
                let ok = k.get("S3").copied().unwrap_or(0) == 1
                    && k.keys().all(|n| n == "S3" || n == "P2" || n == "P3");
                if !ok {
                    shape_ok = false;
                    detail = format!("unexpected source {}", describe_key(&k));
                    break;
                }
            }
            Err(_) => {
                shape_ok = false;
                detail = "non-decomposable source".into();
                break;
            }
        }
    }
    facts.push(Fact::new(
        "weak-isomorphism sources over S3 all have shape S3 + P2^a + P3^b",
        shape_ok,
        detail,
    ));
    for d in [2usize, 3] {
        let d1 = loc_hom_by_key(inst, &key1("S3"), &key1("I3"), d);
        let d2 = loc_hom_by_key(inst, &key1("S4"), &key1("I3"), d);
        facts.push(Fact::new(
            &format!("localized homs into I3 at depth {d}"),
            d1 == 1 && d2 == 0,
            format!("dim(S3 -> I3) = {d1} (expected 1), dim(S4 -> I3) = {d2} (expected 0)"),
        ));
    }
    facts
}

/// An admissibly percolating subcategory whose quotient satisfies every
/// kernel axiom except composition of deflations.
pub fn demo_r3(inst: &Instance) -> Vec<Fact> {
    let mut facts = Vec::new();
    let class = classify_subcategory(inst);
    let adm = find_report(&class, "AdmissiblyDeflationPercolating").unwrap();
    facts.push(Fact::new(
        "A is admissibly deflation-percolating",
        adm.holds,
        "A1-A3 decided at the bound".into(),
    ));
    let adm_props = check_admissible_properties(inst);
    for (name, detail) in [
        ("WeakIsosAdmissible", "every enumerated weak isomorphism is admissible"),
        ("TwoOutOfThree", "two-out-of-three for quotient isomorphisms"),
        ("Saturation", "maps invertible in the quotient are weak isomorphisms"),
    ] {
        let r = find_report(&adm_props, name).unwrap();
        facts.push(Fact::new(name, r.holds, detail.into()));
    }
    let q = check_quotient_axioms(inst);
    for n in ["QuotientR0", "QuotientR1", "QuotientR2"] {
        let r = find_report(&q, n).unwrap();
        facts.push(Fact::new(n, r.holds, "holds in the quotient".into()));
    }
    let r3 = find_report(&q, "QuotientR3").unwrap();
    let w = r3.witness.clone().unwrap_or_default();
    facts.push(Fact::new(
        "QuotientR3 fails: composing with a deflation can create a fake deflation",
        !r3.holds && w.contains("Pc") && w.contains("Sc"),
        format!("witness: {w}"),
    ));
    facts
}

/// A cohereditary torsion-free class that percolates without being special.
pub fn demo_torsion(inst: &Instance) -> Vec<Fact> {
    let mut facts = Vec::new();
    let tp = check_torsion_pair(inst);
    for n in ["TorsionHomVanishing", "TorsionSequences", "Cohereditary:FSerre"] {
        let r = find_report(&tp, n).unwrap();
        facts.push(Fact::new(n, r.holds, "torsion-pair condition".into()));
    }
    let class = classify_subcategory(inst);
    let perc = find_report(&class, "DeflationPercolating").unwrap();
    facts.push(Fact::new(
        "F = add{S2, X} is deflation-percolating",
        perc.holds,
        "P1-P4 decided at the bound".into(),
    ));
    let special = find_report(&class, "RightSpecial").unwrap();
    let w = special.witness.clone().unwrap_or_default();
    facts.push(Fact::new(
        "right-special fails with an inflation X >-> I2",
        !special.holds && w.contains('X') && w.contains("I2"),
        format!("witness: {w}"),
    ));
    facts
}

/// Independently derived localized hom dimensions for the full path-algebra
/// module category modulo the simple at the sink: maps descend exactly when
/// they survive deleting the sink vertex.
pub fn serre_hom_oracle() -> (&'static [&'static str; 9], [[usize; 9]; 9]) {
    const NAMES: [&str; 9] = ["P2", "P3", "P4", "S2", "X", "I2", "S3", "I3", "S4"];
    let table = [
        [1, 1, 1, 1, 1, 1, 0, 0, 0],
        [0, 1, 1, 0, 1, 1, 1, 1, 0],
        [0, 0, 1, 0, 0, 1, 0, 1, 1],
        [1, 1, 1, 1, 1, 1, 0, 0, 0],
        [0, 1, 1, 0, 1, 1, 1, 1, 0],
        [0, 0, 1, 0, 0, 1, 0, 1, 1],
        [0, 0, 0, 0, 0, 0, 1, 1, 0],
        [0, 0, 0, 0, 0, 0, 0, 1, 1],
        [0, 0, 0, 0, 0, 0, 0, 0, 1],
    ];
    (&NAMES, table)
}

/// The localization at a Serre subcategory closed under subobjects agrees
/// with the abelian quotient on all hom spaces, and keeps exactness.
pub fn demo_serre(inst: &Instance) -> Vec<Fact> {
    let mut facts = Vec::new();
    let (names, expected) = serre_hom_oracle();
    let mut mismatches = Vec::new();
    for (i, from) in names.iter().enumerate() {
        let x = inst.realize(&key1(from));
        let lh = LocHom::new(inst, &x, 3);
        for (j, to) in names.iter().enumerate() {
            let y = inst.realize(&key1(to));
            let got = lh.dim(&y);
            if got != expected[i][j] {
                mismatches.push(format!("{from} -> {to}: got {got}, expected {}", expected[i][j]));
            }
        }
    }
    facts.push(Fact::new(
        "all 81 localized hom dimensions match the abelian quotient",
        mismatches.is_empty(),
        if mismatches.is_empty() { "81/81".into() } else { mismatches.join("; ") },
    ));
    let witness = quotient_r3_witness(inst, 2);
    facts.push(Fact::new(
        "the quotient satisfies composition of deflations at the bound",
        witness.is_none(),
        witness.unwrap_or_else(|| "no counterexample found".into()),
    ));
    facts
}
