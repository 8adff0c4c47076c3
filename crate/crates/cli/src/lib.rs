//! Command logic behind the `cedga` binary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use cedga_core::ainfty::{check_ainfty_relations, check_morphism_relations, check_strict_unitality, CheckMode};
use cedga_core::dga::{linear_part, twist, verify_augmentation, verify_dga};
use cedga_core::dgaparse::parse;
use cedga_core::lambda_family::{
    self as lf, canonical_augmentation, obstruction_check, reference, KnotParams, TEN_TUPLES,
};
use cedga_core::surface::formality_check;
use cedga_core::transfer::transfer_products;
use cedga_core::{AInfinityAlgebra, Field, FreeDga, MorphismCandidate};

#[derive(Parser, Debug)]
#[command(name = "cedga", version, about = "Chekanov–Eliashberg DGAs, A∞ duals and homotopy transfer")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub q: usize,
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub s: usize,
    /// A prime, or `Q`.
    #[arg(long, default_value = "2")]
    pub field: Field,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the DGA, the augmentation and the twisted differential.
    Verify(FamilyArgs),
    /// Linearized homology of the twisted DGA.
    Linhom(FamilyArgs),
    /// Product table of the dual A∞-algebra B.
    Dual(FamilyArgs),
    /// Minimal model A and the transferred morphism F : A → B.
    Transfer {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
    },
    /// The obstruction to an A∞ quasi-isomorphism with surface cochains.
    Obstruct {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Required whenever `--samples` is positive.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// The formality zig-zag for a closed surface of the given genus.
    Formality {
        #[arg(long)]
        genus: usize,
    },
    /// Parse, verify and linearize a `.dga` file.
    Check { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub status: Status,
    pub details: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub params: Value,
    pub results: BTreeMap<String, CheckResult>,
    pub version: String,
}

impl Report {
    fn new(command: &str, params: Value) -> Self {
        Report {
            command: command.into(),
            params,
            results: BTreeMap::new(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }

    fn check(&mut self, name: &str, passed: bool, details: impl Serialize) {
        let status = if passed { Status::Pass } else { Status::Fail };
        self.push(name, status, details);
    }

    fn info(&mut self, name: &str, details: impl Serialize) {
        self.push(name, Status::Info, details);
    }

    fn push(&mut self, name: &str, status: Status, details: impl Serialize) {
        let details = serde_json::to_value(details).expect("reports serialize");
        self.results.insert(name.into(), CheckResult { status, details });
    }

    pub fn passed(&self) -> bool {
        self.results.values().all(|r| r.status != Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("cedga {} {}\n", self.command, self.params);
        for (name, r) in &self.results {
            let tag = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Info => "INFO",
            };
            let _ = writeln!(out, "[{tag}] {name}");
            render_text(&r.details, 1, &mut out);
        }
        let _ = writeln!(out, "{}", if self.passed() { "all checks passed" } else { "some checks failed" });
        out
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) | Value::Array(_) if !is_flat(x) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render_text(x, indent + 1, out);
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k}: {}", scalar_text(x));
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                if is_flat(x) {
                    let _ = writeln!(out, "{pad}{}", scalar_text(x));
                } else {
                    let _ = writeln!(out, "{pad}-");
                    render_text(x, indent + 1, out);
                }
            }
        }
        _ => {
            let _ = writeln!(out, "{pad}{}", scalar_text(v));
        }
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Object(m) => m.is_empty(),
        Value::Array(a) => a.iter().all(|x| !x.is_object() && !x.is_array()),
        _ => true,
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => {
            let parts: Vec<String> = a.iter().map(scalar_text).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::Object(_) => "{}".into(),
        other => other.to_string(),
    }
}

/// A usage-level failure: bad parameters, unreadable input.
#[derive(Debug)]
pub struct UsageError(pub String);

fn family(args: &FamilyArgs) -> Result<(KnotParams, Value), UsageError> {
    let k = KnotParams::new(args.p, args.q, args.r, args.s).map_err(|e| UsageError(e.to_string()))?;
    let params = json!({
        "p": args.p, "q": args.q, "r": args.r, "s": args.s,
        "field": args.field.to_string(),
    });
    Ok((k, params))
}

fn internal(e: cedga_core::Error) -> UsageError {
    UsageError(e.to_string())
}

fn product_lines(a: &AInfinityAlgebra, arities: impl IntoIterator<Item = usize>, skip_unit: bool) -> Vec<String> {
    let mut lines = Vec::new();
    for d in arities {
        for (k, v) in a.entries(d) {
            if skip_unit && k.contains(&a.unit()) {
                continue;
            }
            lines.push(format!("{} = {}", a.tuple_name(k), a.vector_string(v)));
        }
    }
    lines
}

fn morphism_lines(source: &AInfinityAlgebra, target: &AInfinityAlgebra, f: &MorphismCandidate) -> Vec<String> {
    let mut lines = Vec::new();
    for d in 1..=f.max_arity() {
        for (k, v) in f.entries(d) {
            let args: Vec<&str> = k.iter().map(|&i| source.name(i)).collect();
            lines.push(format!("F{}({}) = {}", sup(d), args.join(", "), target.vector_string(v)));
        }
    }
    lines
}

fn sup(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).expect("decimal digit") as usize])
        .collect()
}

fn dga_differences(computed: &FreeDga, expected: &FreeDga) -> Vec<String> {
    let al = computed.alphabet();
    let mut out = Vec::new();
    for g in al.iter() {
        let c = computed.d(g.id);
        let e = expected.d_of(&g.name);
        if e != Some(c) {
            out.push(format!(
                "{}: computed {}, expected {}",
                g.name,
                c.display(al),
                e.map_or("-".into(), |p| p.display(expected.alphabet()).to_string())
            ));
        }
    }
    out
}

fn homology_table(d: &FreeDga) -> Result<BTreeMap<String, usize>, cedga_core::Error> {
    let lin = linear_part(d)?;
    Ok(lin
        .homology_dims()
        .into_iter()
        .filter(|&(_, n)| n > 0)
        .map(|(k, n)| (k.to_string(), n))
        .collect())
}

fn verify(args: &FamilyArgs) -> Result<Report, UsageError> {
    let (k, params) = family(args)?;
    let mut r = Report::new("verify", params);
    let d = lf::build_ce_dga(&k, args.field).map_err(internal)?;
    let dr = verify_dga(&d);
    let failures: Vec<_> = dr.failures().cloned().collect();
    r.check("dga", dr.passed(), json!({ "generators": d.num_generators(), "failures": failures }));
    let eps = canonical_augmentation(&k, args.field);
    let ar = verify_augmentation(&d, &eps);
    r.check("augmentation", ar.passed(), &ar);
    let t = twist(&d, &eps).map_err(internal)?;
    let tr = verify_dga(&t);
    let constants: Vec<String> = t
        .alphabet()
        .iter()
        .filter(|g| !t.d(g.id).constant_term().is_zero())
        .map(|g| g.name.clone())
        .collect();
    r.check(
        "twisted_dga",
        tr.passed() && constants.is_empty(),
        json!({ "failures": tr.failures().cloned().collect::<Vec<_>>(), "constant_terms": constants }),
    );
    let golden = reference::twisted_differential(&k, args.field).map_err(internal)?;
    let diffs = dga_differences(&t, &golden);
    r.check("twist_golden", diffs.is_empty(), json!({ "differences": diffs }));
    let inv = lf::classical_invariants(&k);
    r.info("classical_invariants", inv);
    Ok(r)
}

fn linhom(args: &FamilyArgs) -> Result<Report, UsageError> {
    let (k, params) = family(args)?;
    let mut r = Report::new("linhom", params);
    let t = lf::twisted_dga(&k, args.field).map_err(internal)?;
    let lin = linear_part(&t).map_err(internal)?;
    r.check("linear_complex", lin.is_complex(), json!({ "d_squared_zero": lin.is_complex() }));
    r.info("homology", homology_table(&t).map_err(internal)?);
    Ok(r)
}

fn dual(args: &FamilyArgs) -> Result<Report, UsageError> {
    let (k, params) = family(args)?;
    let mut r = Report::new("dual", params);
    let b = lf::dual_algebra(&k, args.field).map_err(internal)?;
    let table = product_lines(&b, 1..=b.max_arity(), true);
    r.info("products", table);
    let cmp = reference::compare_table(&b, &reference::dual_table(&k), &[1, 2, 3, 4]);
    r.check("golden", cmp.passed(), &cmp);
    let rel = check_ainfty_relations(&b, 1..=4, CheckMode::Exhaustive);
    r.check("relations", rel.passed(), &rel);
    let unit = check_strict_unitality(&b);
    r.check("strict_unit", unit.passed(), &unit);
    Ok(r)
}

fn transfer(args: &FamilyArgs, max_arity: usize) -> Result<Report, UsageError> {
    let (k, mut params) = family(args)?;
    params["max_arity"] = json!(max_arity);
    let mut r = Report::new("transfer", params);
    let b = lf::dual_algebra(&k, args.field).map_err(internal)?;
    let c = lf::standard_contraction(&k, b).map_err(internal)?;
    let t = transfer_products(&c, max_arity).map_err(internal)?;
    let a = &t.minimal;
    r.check("contraction", t.contraction.passed(), &t.contraction);
    r.info("repaired_side_conditions", t.repaired);
    r.info("products", product_lines(a, 2..=max_arity, true));
    r.info("morphism", morphism_lines(a, c.source(), &t.morphism));
    let mu2 = reference::compare_table(a, &reference::minimal_mu2_table(&k), &[2]);
    r.check("mu2_golden", mu2.passed(), &mu2);
    if max_arity >= 3 {
        let n = a.num_entries(3);
        let nonunit = product_lines(a, [3], true);
        r.check("mu3_zero", nonunit.is_empty(), json!({ "entries": n, "nonzero": nonunit }));
    }
    if max_arity >= 4 {
        let mut table = reference::minimal_mu4_table(&k);
        let listed: Vec<Vec<String>> = table.iter().map(|e| e.args.clone()).collect();
        for t in TEN_TUPLES {
            let args: Vec<String> = t.iter().map(|&i| lf::b_name(i)).collect();
            if !listed.contains(&args) {
                table.push(reference::TableEntry { args, value: vec![] });
            }
        }
        let mut mismatches = Vec::new();
        for e in &table {
            let idx: Vec<usize> = e.args.iter().map(|n| a.expect_index(n)).collect();
            let exp = reference::table_vector(a, &e.value);
            let act = a.product(&idx).cloned().unwrap_or_default();
            if exp != act {
                mismatches.push(json!({
                    "args": e.args, "expected": a.vector_string(&exp), "actual": a.vector_string(&act),
                }));
            }
        }
        let shape: Vec<String> = a
            .entries(4)
            .filter(|(k, _)| !k.contains(&a.unit()))
            .filter(|(k, _)| !mu4_shape(k))
            .map(|(k, _)| a.tuple_name(k))
            .collect();
        r.check("mu4_golden", mismatches.is_empty(), json!({ "ten_tuples": mismatches }));
        r.check("mu4_shape", shape.is_empty(), json!({ "outside_shape": shape }));
    }
    let rel = check_ainfty_relations(a, 1..=max_arity.min(5), CheckMode::Exhaustive);
    r.check("relations", rel.passed(), &rel);
    let mr = check_morphism_relations(a, c.source(), &t.morphism, 1..=max_arity, CheckMode::Exhaustive);
    r.check("morphism_relations", mr.passed(), &mr);
    Ok(r)
}

/// `(b_i, b_{i±3}, b_j, b_{j±3})`, with `b_i` at A-index `i + 1`.
fn mu4_shape(k: &[usize]) -> bool {
    let b = |x: usize| (2..=7).contains(&x).then(|| x - 1);
    let pair = |x: usize, y: usize| matches!((b(x), b(y)), (Some(i), Some(j)) if i.abs_diff(j) == 3);
    pair(k[0], k[1]) && pair(k[2], k[3])
}

fn obstruct(args: &FamilyArgs, samples: usize, seed: Option<u64>) -> Result<Report, UsageError> {
    let (k, mut params) = family(args)?;
    let seed = match (samples, seed) {
        (0, _) => return Err(UsageError("--samples must be positive".into())),
        (_, None) => return Err(UsageError("--seed is required when --samples > 0".into())),
        (_, Some(s)) => s,
    };
    params["samples"] = json!(samples);
    params["seed"] = json!(seed);
    let mut r = Report::new("obstruct", params);
    let o = obstruction_check(&k, args.field, samples, seed).map_err(internal)?;
    r.check(
        "lhs",
        o.lhs_matches(),
        json!({ "coefficient": o.lhs_coefficient, "expected": o.lhs_expected, "other_terms": o.lhs_other_terms }),
    );
    r.check(
        "rhs_sampling",
        o.rhs_random_failures == 0,
        json!({ "samples": o.samples, "seed": o.seed, "failures": o.rhs_random_failures }),
    );
    r.check("square_vanishing", o.squares.passed(), &o.squares);
    if args.field.characteristic() == 2 {
        r.check(
            "symbolic_residual",
            o.symbolic_residual.is_empty(),
            json!({ "residual": o.symbolic_residual }),
        );
        r.check("verdict", o.verdict == Some(true), json!({ "no_quasi_isomorphism": o.verdict }));
    } else {
        r.info("symbolic_residual", json!({ "residual": o.symbolic_residual }));
        r.check(
            "reference_residual",
            o.residual_matches_reference,
            json!({ "computed": o.symbolic_residual, "expected": o.reference_residual }),
        );
    }
    Ok(r)
}

fn formality(genus: usize) -> Result<Report, UsageError> {
    let mut r = Report::new("formality", json!({ "genus": genus }));
    let f = formality_check(genus).map_err(internal)?;
    for a in &f.algebras {
        r.check(&format!("algebra:{}", a.name), a.passed(), a);
    }
    for m in &f.morphisms {
        r.check(&format!("morphism:{}", m.name), m.passed(), m);
    }
    for (name, q) in &f.quasi_isos {
        r.check(&format!("quasi_iso:{name}"), q.is_quasi_iso(), q);
    }
    let expected = vec![1, 2 * genus, 1];
    for (name, dims) in &f.cohomology {
        r.check(&format!("cohomology:{name}"), *dims == expected, dims);
    }
    Ok(r)
}

fn check(file: &PathBuf) -> Result<Report, UsageError> {
    let text = std::fs::read_to_string(file).map_err(|e| UsageError(format!("{}: {e}", file.display())))?;
    let mut r = Report::new("check", json!({ "file": file.display().to_string() }));
    let doc = match parse(&text) {
        Ok(doc) => doc,
        Err(e) => {
            r.check("parse", false, e.to_string());
            return Ok(r);
        }
    };
    let d = &doc.dga;
    r.check(
        "parse",
        true,
        json!({ "field": d.field().to_string(), "generators": d.num_generators() }),
    );
    let dr = verify_dga(d);
    r.check("dga", dr.passed(), json!({ "failures": dr.failures().cloned().collect::<Vec<_>>() }));
    let linear_source = match &doc.augmentation {
        Some(eps) => {
            let ar = verify_augmentation(d, eps);
            r.check("augmentation", ar.passed(), &ar);
            if !ar.passed() {
                return Ok(r);
            }
            twist(d, eps).map_err(internal)?
        }
        None => d.clone(),
    };
    match homology_table(&linear_source) {
        Ok(h) => r.info("linearized_homology", h),
        Err(e) => r.check("linearized_homology", false, e.to_string()),
    }
    Ok(r)
}

/// Runs one command. `Err` is a usage error (exit 2).
pub fn run(cli: &Cli) -> Result<Report, UsageError> {
    match &cli.command {
        Command::Verify(a) => verify(a),
        Command::Linhom(a) => linhom(a),
        Command::Dual(a) => dual(a),
        Command::Transfer { family, max_arity } => transfer(family, *max_arity),
        Command::Obstruct { family, samples, seed } => obstruct(family, *samples, *seed),
        Command::Formality { genus } => formality(*genus),
        Command::Check { file } => check(file),
    }
}
