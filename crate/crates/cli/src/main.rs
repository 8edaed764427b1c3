use std::fmt::Display;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use compalg::algebra::{Algebra, Check, Law, Mode, Report, VerifyMode};
use compalg::hurwitz::{
    cayley_dickson, cayley_dickson_tower, ground, preserves_polar_form, quadratic_etale, rotation_so3, rotation_so4,
    split_basis, split_cayley, trace_zero_basis,
};
use compalg::io::{algebra_from_str, algebra_to_string, lie_to_json};
use compalg::linalg::Matrix;
use compalg::magic_square::{build_g, jacobi_check, lie_invariants, magic_slot, magic_table, Flavor, JacobiMode};
use compalg::scalars::{Field, Scalar};
use compalg::symcomp::{
    char3_twodim, cyclic_automorphism, grading_automorphism, okubo_char3, okubo_second_kind, okubo_sl3, para, petersson,
    split_okubo, AlgebraAutomorphism,
};
use compalg::triality::{pi0_inverse, t_triple, theta_fixed_dimension, tri_basis, tri_solution_basis};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "compalg", version, about = "Composition algebras, triality and the magic square over exact fields")]
struct Cli {
    /// Worker threads for parallel checks (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for sampled checks that do not carry their own.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an algebra and write it as JSON.
    Build(BuildArgs),
    /// Print the multiplication table of an algebra.
    Table {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Layout::Natural)]
        layout: Layout,
    },
    /// Run a verification suite; exits 1 with a witness on failure.
    Verify {
        #[arg(value_enum)]
        property: Property,
        input: PathBuf,
        /// Enumerate all pairs of elements (finite fields only) instead of checking symbolically.
        #[arg(long, value_name = "CAP")]
        exhaustive: Option<u128>,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Find a basis of an isotropic octonion algebra with the split Cayley table.
    SplitBasis {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Triality Lie algebra of an eight-dimensional symmetric composition algebra.
    Triality {
        #[arg(value_enum)]
        action: TrialityAction,
        input: PathBuf,
    },
    /// Build a magic square entry g(S, S').
    Magic(MagicArgs),
    /// Rotation of the trace-zero quaternions (`--q`) or of all quaternions (`--p` and `--q`).
    Rotate {
        #[arg(long, default_value = "q")]
        field: String,
        /// Parameters of the quaternion algebra (a, b).
        #[arg(long, default_value = "-1,-1")]
        params: String,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        q: String,
    },
    /// Kaplansky unitalization of a composition algebra at an element of nonzero norm.
    Unitalize {
        input: PathBuf,
        #[arg(long)]
        element: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Ground,
    Etale,
    Cd,
    SplitCayley,
    Para,
    Petersson,
    SplitOkubo,
    OkuboSl3,
    OkuboJ,
    OkuboChar3,
    Char3Dim2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Automorphism {
    Identity,
    Cyclic,
    Grading,
}

#[derive(clap::Args)]
struct BuildArgs {
    #[arg(value_enum)]
    kind: Kind,
    /// Field shorthand: q, gf:p, gf:3(t), or a JSON descriptor.
    #[arg(long, default_value = "q")]
    field: String,
    /// Parameter of the quadratic etale algebra (etale, and cd when given).
    #[arg(long)]
    mu: Option<String>,
    /// Comma-separated doubling parameters for cd.
    #[arg(long)]
    alphas: Option<String>,
    /// Input algebra for para and petersson (default for petersson: split Cayley).
    #[arg(long)]
    from: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Automorphism::Cyclic)]
    automorphism: Automorphism,
    /// Primitive cube root of unity (found automatically when omitted).
    #[arg(long)]
    omega: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Layout {
    Natural,
    Figure1,
    Figure2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Composition,
    Hurwitz,
    Symmetric,
    Associative,
    Commutative,
    Flexible,
}

#[derive(Clone, Copy, ValueEnum)]
enum TrialityAction {
    Dim,
    FixedDim,
    Verify,
}

#[derive(clap::Args)]
struct MagicArgs {
    /// 1, 2, 4, 8 or okubo8.
    #[arg(long)]
    row: String,
    #[arg(long)]
    col: String,
    #[arg(long, default_value = "q")]
    field: String,
    /// full, sample:N or sample:N:SEED.
    #[arg(long)]
    jacobi: Option<String>,
    #[arg(long)]
    invariants: bool,
    /// Also write the Lie algebra as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    /// Bad input or a construction that does not apply; exit 2.
    Input(String),
    /// A verification ran and failed; exit 1.
    Verification,
}

fn input<E: Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

type Res<T> = Result<T, Failure>;

fn read_text(path: &PathBuf) -> Res<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(input)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }
}

fn load(path: &PathBuf) -> Res<Algebra> {
    algebra_from_str(&read_text(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: &Option<PathBuf>) -> Res<()> {
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn field(s: &str) -> Res<Field> {
    Field::from_shorthand(s).map_err(input)
}

fn scalar(f: &Field, s: &str) -> Res<Scalar> {
    f.parse(s.trim()).map_err(input)
}

fn scalars(f: &Field, s: &str) -> Res<Vec<Scalar>> {
    s.split(',').map(|x| scalar(f, x)).collect()
}

fn required<'a>(v: &'a Option<String>, flag: &str) -> Res<&'a str> {
    v.as_deref().ok_or_else(|| Failure::Input(format!("--{flag} is required")))
}

fn omega(f: &Field, given: &Option<String>) -> Res<Scalar> {
    match given {
        Some(s) => scalar(f, s),
        None => f
            .primitive_cube_root()
            .map_err(input)?
            .ok_or_else(|| Failure::Input(format!("{} has no primitive cube root of unity; pass --omega", f.name()))),
    }
}

fn build(a: &BuildArgs) -> Res<()> {
    let f = field(&a.field)?;
    let alg = match a.kind {
        Kind::Ground => ground(&f),
        Kind::Etale => quadratic_etale(&f, &scalar(&f, required(&a.mu, "mu")?)?).map_err(input)?,
        Kind::Cd => {
            let alphas = scalars(&f, required(&a.alphas, "alphas")?)?;
            match &a.mu {
                Some(mu) => {
                    let mut h = quadratic_etale(&f, &scalar(&f, mu)?).map_err(input)?;
                    for al in &alphas {
                        h = cayley_dickson(&h, al).map_err(input)?;
                    }
                    h
                }
                None => cayley_dickson_tower(&f, &alphas).map_err(input)?.pop().expect("tower is nonempty"),
            }
        }
        Kind::SplitCayley => split_cayley(&f),
        Kind::Para => {
            let path = a.from.as_ref().ok_or_else(|| Failure::Input("--from is required".into()))?;
            para(&load(path)?).map_err(input)?
        }
        Kind::Petersson => {
            let c = match &a.from {
                Some(p) => load(p)?,
                None => split_cayley(&f),
            };
            let phi = match a.automorphism {
                Automorphism::Identity => AlgebraAutomorphism::identity(&c),
                Automorphism::Cyclic => cyclic_automorphism(&c).map_err(input)?,
                Automorphism::Grading => grading_automorphism(&c, &omega(&c.field, &a.omega)?).map_err(input)?,
            };
            petersson(&c, &phi).map_err(input)?
        }
        Kind::SplitOkubo => split_okubo(&f),
        Kind::OkuboSl3 => okubo_sl3(&f, &omega(&f, &a.omega)?).map_err(input)?,
        Kind::OkuboJ => okubo_second_kind(&f).map_err(input)?,
        Kind::OkuboChar3 => {
            let alpha = scalar(&f, required(&a.alpha, "alpha")?)?;
            let beta = scalar(&f, required(&a.beta, "beta")?)?;
            okubo_char3(&f, &alpha, &beta).map_err(input)?
        }
        Kind::Char3Dim2 => char3_twodim(&f, &scalar(&f, required(&a.lambda, "lambda")?)?, true).map_err(input)?,
    };
    emit(&algebra_to_string(&alg), &a.out)
}

fn table(path: &PathBuf, layout: Layout) -> Res<()> {
    let a = load(path)?;
    let order: Vec<usize> = match layout {
        Layout::Natural => (0..a.dim()).collect(),
        Layout::Figure1 | Layout::Figure2 => {
            if a.dim() != 8 {
                return Err(Failure::Input("figure layouts need an eight-dimensional algebra".into()));
            }
            match layout {
                Layout::Figure1 => (0..8).collect(),
                _ => vec![0, 1, 2, 5, 3, 6, 4, 7],
            }
        }
    };
    print!("{}", a.multiplication_table(&order));
    Ok(())
}

fn report_outcome(r: &Report, as_json: bool) -> Res<()> {
    if as_json {
        println!("{}", serde_json::to_string_pretty(r).expect("serializable"));
    } else {
        print!("{}", r.summary());
    }
    if r.passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn verify(property: Property, path: &PathBuf, exhaustive: Option<u128>, as_json: bool) -> Res<()> {
    let a = load(path)?;
    let mode = exhaustive.map_or(VerifyMode::Symbolic, |cap| VerifyMode::Exhaustive { cap });
    let r = match property {
        Property::Composition => a.verify_composition(mode).map_err(input)?,
        Property::Hurwitz => {
            let mut r = a.verify_composition(mode).map_err(input)?;
            let h = a.verify_hurwitz_properties().map_err(input)?;
            r.checks.extend(h.checks);
            Report::new(&r.subject, "Hurwitz algebra", r.checks)
        }
        Property::Symmetric => a.verify_symmetric().map_err(input)?,
        Property::Associative => a.verify_law(Law::Associative),
        Property::Commutative => a.verify_law(Law::Commutative),
        Property::Flexible => a.verify_law(Law::Flexible),
    };
    report_outcome(&r, as_json)
}

fn matrix_json(f: &Field, m: &Matrix) -> Value {
    json!((0..m.rows).map(|i| m.row(i).iter().map(|c| f.format(c)).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn split_basis_cmd(path: &PathBuf, budget: usize, out: &Option<PathBuf>) -> Res<()> {
    let a = load(path)?;
    let bc = split_basis(&a, budget).map_err(input)?;
    let v = json!({ "matrix": matrix_json(&a.field, &bc.matrix), "verified": bc.verified });
    emit(&v.to_string(), out)?;
    if bc.verified {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn linear_check(name: &str, passed: bool, detail: Option<String>) -> Check {
    Check { name: name.into(), mode: Mode::Linear, passed, witness: None, detail }
}

fn triality(action: TrialityAction, path: &PathBuf) -> Res<()> {
    let s = load(path)?;
    let f = s.field.clone();
    match action {
        TrialityAction::Dim => {
            println!("{}", tri_solution_basis(&s).map_err(input)?.len());
            Ok(())
        }
        TrialityAction::FixedDim => {
            let basis = tri_solution_basis(&s).map_err(input)?;
            println!("{}", theta_fixed_dimension(&f, &basis).map_err(input)?);
            Ok(())
        }
        TrialityAction::Verify => {
            let sol = tri_solution_basis(&s).map_err(input)?;
            let span = tri_basis(&s).map_err(input)?;
            let mut unrelated = None;
            'outer: for i in 0..s.dim() {
                for j in i + 1..s.dim() {
                    if !t_triple(&s, &s.basis(i), &s.basis(j)).map_err(input)?.is_related(&s) {
                        unrelated = Some(format!("t({}, {})", s.labels[i], s.labels[j]));
                        break 'outer;
                    }
                }
            }
            let mut round_trip = true;
            let mut theta_cubed = true;
            for t in &sol {
                round_trip &= pi0_inverse(&s, &t.d[0]).map_err(input)? == *t;
                theta_cubed &= t.theta().theta().theta() == *t;
            }
            let checks = vec![
                linear_check("dim tri = 28", sol.len() == 28, Some(format!("{}", sol.len()))),
                linear_check("tri is spanned by t(x, y)", span.len() == sol.len(), Some(format!("span rank {}", span.len()))),
                linear_check("t(x, y) are related triples", unrelated.is_none(), unrelated),
                linear_check("pi0 inverse round trip", round_trip, None),
                linear_check("theta^3 = id", theta_cubed, None),
            ];
            report_outcome(&Report::new(&s.name, "local triality", checks), false)
        }
    }
}

fn slot(f: &Field, name: &str) -> Res<(Algebra, Flavor)> {
    let (dim, flavor) = match name {
        "okubo8" => (8, Flavor::OkuboMix),
        n => (n.parse::<usize>().map_err(|_| Failure::Input(format!("bad slot {n}: expected 1, 2, 4, 8 or okubo8")))?, Flavor::Para),
    };
    Ok((magic_slot(f, dim, flavor).map_err(input)?, flavor))
}

fn parse_jacobi(s: &str, default_seed: u64) -> Res<JacobiMode> {
    if s == "full" {
        return Ok(JacobiMode::Full);
    }
    let bad = || Failure::Input(format!("bad --jacobi {s}: expected full, sample:N or sample:N:SEED"));
    let rest = s.strip_prefix("sample:").ok_or_else(bad)?;
    let mut parts = rest.split(':');
    let count = parts.next().and_then(|c| c.parse().ok()).ok_or_else(bad)?;
    let seed = match parts.next() {
        Some(x) => x.parse().map_err(|_| bad())?,
        None => default_seed,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(JacobiMode::Sample { count, seed })
}

fn magic(a: &MagicArgs, default_seed: u64) -> Res<()> {
    let f = field(&a.field)?;
    let mode = a.jacobi.as_deref().map(|s| parse_jacobi(s, default_seed)).transpose()?;
    let (s, fs) = slot(&f, &a.row)?;
    let (s2, fs2) = slot(&f, &a.col)?;
    let g = build_g(&s, &s2).map_err(input)?;
    let mut out = json!({
        "field": f.name(),
        "row": a.row,
        "col": a.col,
        "dim": g.dim(),
        "sectors": g.sectors,
    });
    let flavor = if fs == Flavor::OkuboMix || fs2 == Flavor::OkuboMix { Flavor::OkuboMix } else { Flavor::Para };
    if let Ok(t) = magic_table(&f, flavor) {
        out["grid"] = json!(t.dims);
    }
    let mut passed = true;
    if let Some(mode) = mode {
        let r = jacobi_check(&g, mode);
        passed = r.passed;
        out["reports"] = json!([r]);
        if !r.passed {
            eprint!("{}", r.summary());
        }
    }
    if a.invariants {
        out["invariants"] = json!(lie_invariants(&g));
    }
    if let Some(p) = &a.out {
        let text = serde_json::to_string_pretty(&lie_to_json(&g)).expect("serializable");
        emit(&text, &Some(p.clone()))?;
    }
    println!("{out}");
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn rotate(field_s: &str, params: &str, p: &Option<String>, q: &str) -> Res<()> {
    let f = field(field_s)?;
    let ab = scalars(&f, params)?;
    if ab.len() != 2 {
        return Err(Failure::Input("--params takes two scalars".into()));
    }
    let h = cayley_dickson_tower(&f, &ab).map_err(input)?.pop().expect("tower is nonempty");
    let n = h.norm().map_err(input)?;
    let qv = h.parse_element(q).map_err(input)?;
    let (m, orthogonal) = match p {
        None => {
            let m = rotation_so3(&h, &qv).map_err(input)?;
            let n3 = n.in_basis(&trace_zero_basis(&h).map_err(input)?);
            let ok = preserves_polar_form(&n3, &m);
            (m, ok)
        }
        Some(p) => {
            let pv = h.parse_element(p).map_err(input)?;
            let m = rotation_so4(&h, &pv, &qv).map_err(input)?;
            let ok = preserves_polar_form(n, &m);
            (m, ok)
        }
    };
    let v = json!({
        "matrix": matrix_json(&f, &m),
        "determinant": f.format(&m.determinant()),
        "orthogonal": orthogonal,
    });
    println!("{v}");
    Ok(())
}

fn unitalize(path: &PathBuf, element: &str, out: &Option<PathBuf>) -> Res<()> {
    let s = load(path)?;
    let a = s.parse_element(element).map_err(input)?;
    let u = s.kaplansky_unitalize(&a).map_err(input)?;
    emit(&algebra_to_string(&u), out)
}

fn run(cli: Cli) -> Res<()> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(input)?;
    }
    match &cli.command {
        Command::Build(a) => build(a),
        Command::Table { input, layout } => table(input, *layout),
        Command::Verify { property, input, exhaustive, json } => verify(*property, input, *exhaustive, *json),
        Command::SplitBasis { input, budget, out } => split_basis_cmd(input, *budget, out),
        Command::Triality { action, input } => triality(*action, input),
        Command::Magic(a) => magic(a, cli.seed),
        Command::Rotate { field, params, p, q } => rotate(field, params, p, q),
        Command::Unitalize { input, element, out } => unitalize(input, element, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
