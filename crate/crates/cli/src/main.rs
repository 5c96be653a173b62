mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use arrcoh::arrangement::{
    e2_certificate, vanishing_check, Arrangement, ArrangementJson, BuildingSetKind, IntersectionLattice,
    NestedComplex, RankOneSystem, VanishingMode, WeightsJson,
};
use arrcoh::covers::{e2_support, validate_cover, CoverDescription, CoverJson};
use arrcoh::elliptic::{
    analyze, component_count, component_label, convenient_check, elliptic_vanishing_certificate, intersection_poset,
    Character, EllipticArrangement, EllipticJson,
};
use arrcoh::linalg::{Coefficients, FieldTag};
use arrcoh::salvetti::twisted_cohomology;
use arrcoh::simplicial::{ComplexJson, SimplicialComplex};
use arrcoh::toric::{toric_certificate, toric_cohomology, toric_e2_page, verify_cm_theorem, ToricRankOneSystem};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde_json::{json, Map, Value};

use render::{coeffs_name, cohomology_table, e2_grid, field_name, json_text, scalar, table, to_value};

#[derive(Parser)]
#[command(name = "arrcoh", version, about = "Combinatorics and rank-one twisted cohomology of arrangements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, global = true, env = "ARRCOH_FORMAT", default_value = "table")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Building {
    Minimal,
    Maximal,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Systems on the projectivized complement, product of weights one.
    Projective,
    /// Systems on the full complement, top flat included.
    IncludeTop,
}

#[derive(Args)]
struct Input {
    /// Input JSON file.
    input: PathBuf,
}

#[derive(Args)]
struct Sampling {
    /// Coefficient field: Q, or a prime written as F101 or 101.
    #[arg(long, value_parser = parse_coeffs)]
    field: Option<Coefficients>,
    /// Seed for sampled weights.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Flats, Möbius values, Poincaré polynomial and β of a hyperplane arrangement.
    ArrLattice(Input),
    /// Poincaré polynomial and β.
    ArrBeta(Input),
    /// Nested-set complex for a building set.
    ArrNested {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "minimal")]
        building: Building,
    },
    /// Vanishing check for a rank-one system, with its E2 certificate.
    ArrVanish {
        #[command(flatten)]
        input: Input,
        /// Weights JSON; sampled from the seed when absent.
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "projective")]
        mode: Mode,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Twisted cohomology of the complement from the Salvetti complex.
    ArrSalvetti {
        #[command(flatten)]
        input: Input,
        /// Weights JSON; the trivial system when absent.
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Also solve for the projectivized complement.
        #[arg(long)]
        projectivized: bool,
        #[arg(long, value_parser = parse_coeffs)]
        field: Option<Coefficients>,
    },
    /// Twisted cohomology of a toric complex and its E2 page.
    ToricCohomology {
        #[command(flatten)]
        input: Input,
        /// Weights JSON keyed by vertex; sampled from the seed when absent.
        #[arg(long)]
        weights: Option<PathBuf>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Cohen–Macaulay test by links, over Z by default.
    ToricCm {
        #[command(flatten)]
        input: Input,
        /// Z, Q, or a prime written as F101 or 101.
        #[arg(long, value_parser = parse_coeffs)]
        field: Option<Coefficients>,
    },
    /// Seeded check of concentration in degree d+1 for Cohen–Macaulay complexes.
    ToricVerify {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Rank, components and intersection poset of an elliptic arrangement.
    EllAnalyze(Input),
    /// Convenience check for the character given in the input file.
    EllConvenient(Input),
    /// E2 certificate for the weights given in the input file or with --weights.
    EllCertify {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Checks the conditions on a cover description; computes E2 support when data is given.
    CoversValidate(Input),
}

fn parse_coeffs(s: &str) -> Result<Coefficients, String> {
    match s {
        "Z" | "z" | "integers" => Ok(Coefficients::Integers),
        "Q" | "q" | "rational" => Ok(Coefficients::Rational),
        _ => {
            let digits = s.strip_prefix('F').or_else(|| s.strip_prefix('f')).unwrap_or(s);
            let p: u64 = digits.parse().map_err(|_| format!("expected Z, Q or a prime such as F101, got {s:?}"))?;
            FieldTag::prime(p).map(Coefficients::from).map_err(|e| e.to_string())
        }
    }
}

fn require_field(c: Coefficients) -> Result<FieldTag, String> {
    c.field().ok_or_else(|| "this command needs a field, not Z".to_string())
}

/// A rendered result. `ok` is false when the verdict is negative.
struct Report {
    json: Value,
    table: String,
    ok: bool,
}

type Outcome = Result<Report, String>;

fn lib<T>(r: arrcoh::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_arrangement(path: &Path) -> Result<Arrangement, String> {
    lib(Arrangement::from_json(&load::<ArrangementJson>(path)?))
}

fn load_complex(path: &Path) -> Result<SimplicialComplex, String> {
    lib(SimplicialComplex::from_json(&load::<ComplexJson>(path)?))
}

fn weights_value(field: FieldTag, labels: &[String], weights: &[arrcoh::linalg::Rational]) -> Value {
    let q: Map<String, Value> = labels.iter().zip(weights).map(|(l, w)| (l.clone(), scalar(field, w))).collect();
    json!({ "field": to_value(&field), "q": q })
}

fn weights_line(field: FieldTag, labels: &[String], weights: &[arrcoh::linalg::Rational]) -> String {
    let parts: Vec<String> = labels.iter().zip(weights).map(|(l, w)| format!("{l}={}", scalar(field, w))).collect();
    format!("weights over {}: {}\n", field_name(field), parts.join(" ").replace('"', ""))
}

fn arr_lattice(path: &Path) -> Outcome {
    let a = load_arrangement(path)?;
    let l = lib(IntersectionLattice::new(&a))?;
    let beta = lib(l.beta())?;
    let pi = l.poincare();
    let mut rows = Vec::new();
    let mut flats = Vec::new();
    for x in 0..l.len() {
        let f = l.flat(x);
        let mu = l.moebius_from_bottom(x);
        rows.push(vec![f.rank.to_string(), l.label(x).to_string(), mu.to_string()]);
        flats.push(json!({
            "label": l.label(x),
            "rank": f.rank,
            "hyperplanes": f.closed_set.iter().map(|&h| a.labels()[h].clone()).collect::<Vec<_>>(),
            "mobius": mu,
        }));
    }
    let table = format!("{}π(t) = {pi}\nβ = {beta}\n", table(&["rank", "flat", "μ(0,X)"], &rows));
    let json = json!({
        "n": a.n(),
        "rank": a.rank(),
        "flats": flats,
        "poincare": poly_value(&pi),
        "beta": beta,
    });
    Ok(Report { json, table, ok: true })
}

fn poly_value(p: &arrcoh::linalg::IntPolynomial) -> Value {
    json!({
        "coefficients": p.coeffs().iter().map(|c| c.to_string().parse::<i64>().expect("small")).collect::<Vec<_>>(),
        "text": p.to_string(),
    })
}

fn arr_beta(path: &Path) -> Outcome {
    let a = load_arrangement(path)?;
    let l = lib(IntersectionLattice::new(&a))?;
    let beta = lib(l.beta())?;
    let pi = l.poincare();
    Ok(Report {
        table: format!("π(t) = {pi}\nβ = {beta}\n"),
        json: json!({ "poincare": poly_value(&pi), "beta": beta }),
        ok: true,
    })
}

fn arr_nested(path: &Path, building: Building) -> Outcome {
    let a = load_arrangement(path)?;
    let l = lib(IntersectionLattice::new(&a))?;
    let kind = match building {
        Building::Minimal => BuildingSetKind::Minimal,
        Building::Maximal => BuildingSetKind::Maximal,
    };
    let n = lib(NestedComplex::new(&l, kind))?;
    let c = n.complex.to_json();
    let building: Vec<&str> = n.building.members.iter().map(|&x| l.label(x)).collect();
    let rows: Vec<Vec<String>> = c.facets.iter().map(|f| vec![f.join(" ")]).collect();
    let table = format!(
        "building set ({}): {}\ndim N = {}\nf-vector: {:?}\n{}",
        to_value(&kind).as_str().unwrap_or_default(),
        building.join(" "),
        n.complex.dim(),
        n.complex.f_vector(),
        table(&["facet"], &rows)
    );
    let json = json!({
        "building": { "kind": to_value(&kind), "members": building },
        "complex": to_value(&c),
        "dim": n.complex.dim(),
        "f_vector": n.complex.f_vector(),
    });
    Ok(Report { json, table, ok: true })
}

fn arr_weights(a: &Arrangement, weights: Option<&Path>, field: FieldTag, seed: u64) -> Result<(RankOneSystem, bool), String> {
    match weights {
        Some(p) => Ok((lib(RankOneSystem::from_json(&load::<WeightsJson>(p)?, a.labels()))?, false)),
        None => Ok((lib(RankOneSystem::sample_projective(field, a.labels(), seed))?, true)),
    }
}

fn arr_vanish(path: &Path, weights: Option<&Path>, mode: Mode, sampling: &Sampling) -> Outcome {
    let a = load_arrangement(path)?;
    let field = require_field(sampling.field.unwrap_or(Coefficients::Prime { p: 101 }))?;
    let (sys, sampled) = arr_weights(&a, weights, field, sampling.seed)?;
    let l = lib(IntersectionLattice::new(&a))?;
    let mode = match mode {
        Mode::Projective => VanishingMode::Projective,
        Mode::IncludeTop => VanishingMode::IncludeTop,
    };
    let v = lib(vanishing_check(&l, &sys, mode))?;
    let mut json = json!({
        "verdict": to_value(&v),
        "weights": weights_value(sys.field, a.labels(), &sys.weights),
        "sampled": sampled.then_some(sampling.seed),
    });
    let mut table = weights_line(sys.field, a.labels(), &sys.weights);
    table += &format!("vanishing ({:?}): {}\n", mode, if v.holds { "holds" } else { "fails" });
    if !v.failing_flats.is_empty() {
        table += &format!("failing flats: {}\n", v.failing_flats.join(" "));
    }
    if let (Some(d), Some(k)) = (v.predicted_degree, v.predicted_dim) {
        table += &format!("predicted: H^{d} of dimension {k}, all other degrees zero\n");
    }
    if mode == VanishingMode::Projective {
        let nested = lib(NestedComplex::new(&l, BuildingSetKind::Minimal))?;
        let cert = lib(e2_certificate(&l, &nested, &sys))?;
        table += &format!("E2 certificate (minimal building set):\n{}", e2_grid(&cert));
        json["certificate"] = to_value(&cert);
    }
    Ok(Report { json, table, ok: v.holds })
}

fn arr_salvetti(path: &Path, weights: Option<&Path>, projectivized: bool, field: Option<Coefficients>) -> Outcome {
    let a = load_arrangement(path)?;
    let sys = match weights {
        Some(p) => lib(RankOneSystem::from_json(&load::<WeightsJson>(p)?, a.labels()))?,
        None => RankOneSystem::trivial(require_field(field.unwrap_or(Coefficients::Rational))?, a.len()),
    };
    let t = lib(twisted_cohomology(&a, &sys, projectivized))?;
    let mut table = weights_line(sys.field, a.labels(), &sys.weights);
    table += &format!("H^*(M):\n{}", cohomology_table(&t.complement));
    if let Some(u) = &t.projectivized {
        let rows: Vec<Vec<String>> = u.iter().enumerate().map(|(k, d)| vec![k.to_string(), d.to_string()]).collect();
        table += &format!("H^*(U):\n{}", render::table(&["degree", "dim"], &rows));
    }
    let json = json!({
        "weights": weights_value(sys.field, a.labels(), &sys.weights),
        "complement": to_value(&t.complement),
        "projectivized": t.projectivized,
    });
    Ok(Report { json, table, ok: true })
}

fn toric_cohomology_cmd(path: &Path, weights: Option<&Path>, sampling: &Sampling) -> Outcome {
    let l = load_complex(path)?;
    let (sys, sampled) = match weights {
        Some(p) => (lib(ToricRankOneSystem::from_json(&load::<WeightsJson>(p)?, l.vertices()))?, false),
        None => {
            let field = require_field(sampling.field.unwrap_or(Coefficients::Prime { p: 101 }))?;
            let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
            (lib(ToricRankOneSystem::sample(field, l.vertices(), &mut rng))?, true)
        }
    };
    let h = lib(toric_cohomology(&l, &sys))?;
    let e2 = lib(toric_e2_page(&l, &sys))?;
    let table = format!(
        "{}{}E2 page (exact where the weights are trivial on a face):\n{}",
        weights_line(sys.field, l.vertices(), &sys.weights),
        cohomology_table(&h),
        e2_grid(&e2)
    );
    let json = json!({
        "weights": weights_value(sys.field, l.vertices(), &sys.weights),
        "sampled": sampled.then_some(sampling.seed),
        "cohomology": to_value(&h),
        "e2": to_value(&e2),
    });
    Ok(Report { json, table, ok: true })
}

fn witness_table(w: &[arrcoh::simplicial::CmWitness]) -> String {
    let rows: Vec<Vec<String>> = w
        .iter()
        .map(|w| {
            let torsion = w.torsion.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" + ");
            vec![format!("{{{}}}", w.simplex.join(",")), w.degree.to_string(), w.rank.to_string(), torsion]
        })
        .collect();
    table(&["link of", "degree", "rank", "torsion"], &rows)
}

fn toric_cm(path: &Path, field: Option<Coefficients>) -> Outcome {
    let l = load_complex(path)?;
    let v = lib(l.is_cohen_macaulay(field.unwrap_or(Coefficients::Integers)))?;
    let mut table = format!(
        "dim {}: {} over {}\n",
        v.dim,
        if v.is_cm { "Cohen–Macaulay" } else { "not Cohen–Macaulay" },
        coeffs_name(v.over)
    );
    if !v.witnesses.is_empty() {
        table += &format!("reduced link cohomology below the top degree:\n{}", witness_table(&v.witnesses));
    }
    Ok(Report { json: to_value(&v), table, ok: v.is_cm })
}

fn toric_verify(path: &Path, trials: usize, sampling: &Sampling) -> Outcome {
    let l = load_complex(path)?;
    let field = require_field(sampling.field.unwrap_or(Coefficients::Prime { p: 101 }))?;
    let r = lib(verify_cm_theorem(&l, trials, field, sampling.seed))?;
    let cm = lib(l.is_cohen_macaulay(field.into()))?;
    let cert = lib(toric_certificate(&l, field))?;
    let rows: Vec<Vec<String>> = r
        .trials
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let dims = t.dims.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
            vec![i.to_string(), t.weights.join(" "), dims, t.concentrated.to_string(), t.e2_total.to_string()]
        })
        .collect();
    let mut table = format!(
        "dim {}, {} over {}, seed {}\n",
        r.dim,
        if r.is_cm { "Cohen–Macaulay" } else { "not Cohen–Macaulay" },
        field_name(field),
        r.seed
    );
    table += &render::table(&["trial", "weights", "dims from degree 0", "concentrated", "E2 total"], &rows);
    if r.is_cm {
        table += &format!("violations: {}\n", r.violations);
    } else {
        table += &format!(
            "non-CM witnesses:\n{}trials with cohomology off degree {}: {}\n",
            witness_table(&cm.witnesses),
            r.dim + 1,
            r.nonconcentration_witnesses
        );
    }
    table += &format!("certificate:\n{}", e2_grid(&cert));
    let ok = r.is_cm && r.holds();
    let json = json!({ "report": to_value(&r), "witnesses": to_value(&cm.witnesses), "certificate": to_value(&cert) });
    Ok(Report { json, table, ok })
}

fn load_elliptic(path: &Path) -> Result<(EllipticArrangement, EllipticJson), String> {
    let j: EllipticJson = load(path)?;
    Ok((lib(EllipticArrangement::from_json(&j))?, j))
}

fn ell_analyze(path: &Path) -> Outcome {
    let (a, _) = load_elliptic(path)?;
    let an = lib(analyze(&a))?;
    let all: Vec<usize> = (0..a.len()).collect();
    let count = lib(component_count(&a, &all))?;
    let p = lib(intersection_poset(&a))?;
    let comps: Vec<Value> = p
        .components
        .iter()
        .map(|x| json!({ "label": component_label(&a, x), "dim": x.dim, "divisors": x.divisors }))
        .collect();
    let rows: Vec<Vec<String>> = p
        .components
        .iter()
        .map(|x| vec![component_label(&a, x), x.dim.to_string(), format!("{:?}", x.divisors)])
        .collect();
    let table = format!(
        "rank {}, corank {}, essential {}, unimodular {}, homotopy dimension {}\ncomponents of the full intersection: {count}\n{}",
        an.rank,
        an.corank,
        an.essential,
        an.unimodular,
        an.homotopy_dim,
        table(&["component", "dim", "elementary divisors"], &rows)
    );
    let json = json!({ "analysis": to_value(&an), "full_intersection_components": count.to_string(), "poset": comps });
    Ok(Report { json, table, ok: true })
}

fn ell_convenient(path: &Path) -> Outcome {
    let (a, j) = load_elliptic(path)?;
    let values = j.character.ok_or_else(|| format!("{}: no \"character\" given", path.display()))?;
    let field = j.field.unwrap_or(FieldTag::Rational);
    let chi = lib(Character::new(field, values.into_iter().map(|s| s.0).collect(), a.n()))?;
    let v = lib(convenient_check(&a, &chi))?;
    let mut table = format!("convenient: {}\n", if v.holds { "yes" } else { "no" });
    if !v.failing.is_empty() {
        table += &format!("character trivial on: {}\n", v.failing.join(" "));
    }
    if let Some(c) = &v.conclusion {
        table += &format!("{c}\n");
    }
    let values: Vec<Value> = chi.values.iter().map(|x| scalar(field, x)).collect();
    let json = json!({ "verdict": to_value(&v), "character": values, "field": to_value(&field) });
    Ok(Report { json, table, ok: v.holds })
}

fn ell_certify(path: &Path, weights: Option<&Path>) -> Outcome {
    let (a, j) = load_elliptic(path)?;
    let w = match weights {
        Some(p) => load::<WeightsJson>(p)?,
        None => j.weights.ok_or_else(|| format!("{}: no \"weights\" given and no --weights file", path.display()))?,
    };
    let sys = lib(RankOneSystem::from_json(&w, a.labels()))?;
    let c = lib(elliptic_vanishing_certificate(&a, &sys))?;
    let rows: Vec<Vec<String>> = c
        .strata
        .iter()
        .map(|s| vec![s.component.clone(), s.dim.to_string(), s.holds.to_string(), s.failing_flats.join(" ")])
        .collect();
    let mut table = weights_line(sys.field, a.labels(), &sys.weights);
    table += &render::table(&["component", "dim", "passes", "failing tangent flats"], &rows);
    table += &e2_grid(&c.support);
    for note in &c.annotations {
        table += &format!("note: {note}\n");
    }
    let ok = c.strata.iter().all(|s| s.holds);
    let json = json!({ "certificate": to_value(&c), "weights": weights_value(sys.field, a.labels(), &sys.weights) });
    Ok(Report { json, table, ok })
}

fn covers_validate(path: &Path) -> Outcome {
    let j: CoverJson = load(path)?;
    let c = lib(CoverDescription::from_json(&j))?;
    let v = lib(validate_cover(&c))?;
    let mut table = format!("valid: {}\n", v.valid);
    let pairs = |xs: &[(String, String)]| xs.iter().map(|(s, t)| format!("{s} <= {t}")).collect::<Vec<_>>().join(", ");
    if !v.order_failures.is_empty() {
        table += &format!("order failures: {}\n", pairs(&v.order_failures));
    }
    if !v.missing_images.is_empty() {
        table += &format!("elements of P outside the image: {}\n", v.missing_images.join(" "));
    }
    if let Some((s, t)) = &v.rank_witness {
        table += &format!("rank condition fails at {s} <= {t}\n");
    }
    if !v.equal_intersection_failures.is_empty() {
        table += &format!("equal intersections, different images: {}\n", pairs(&v.equal_intersection_failures));
    }
    if !v.pending_pairs.is_empty() {
        table += &format!("unsettled pairs (assumed): {}\n", pairs(&v.pending_pairs));
    }
    let mut json = json!({ "verdict": to_value(&v) });
    if let Some(data) = &j.data {
        let s = lib(e2_support(&c.p, &c.rho, data, j.bound))?;
        table += &format!("E2 support:\n{}", e2_grid(&s));
        json["e2"] = to_value(&s);
    }
    Ok(Report { json, table, ok: v.valid })
}

fn dispatch(cmd: &Command) -> Outcome {
    match cmd {
        Command::ArrLattice(i) => arr_lattice(&i.input),
        Command::ArrBeta(i) => arr_beta(&i.input),
        Command::ArrNested { input, building } => arr_nested(&input.input, *building),
        Command::ArrVanish { input, weights, mode, sampling } => {
            arr_vanish(&input.input, weights.as_deref(), *mode, sampling)
        }
        Command::ArrSalvetti { input, weights, projectivized, field } => {
            arr_salvetti(&input.input, weights.as_deref(), *projectivized, *field)
        }
        Command::ToricCohomology { input, weights, sampling } => {
            toric_cohomology_cmd(&input.input, weights.as_deref(), sampling)
        }
        Command::ToricCm { input, field } => toric_cm(&input.input, *field),
        Command::ToricVerify { input, trials, sampling } => toric_verify(&input.input, *trials, sampling),
        Command::EllAnalyze(i) => ell_analyze(&i.input),
        Command::EllConvenient(i) => ell_convenient(&i.input),
        Command::EllCertify { input, weights } => ell_certify(&input.input, weights.as_deref()),
        Command::CoversValidate(i) => covers_validate(&i.input),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(r) => {
            match cli.format {
                Format::Json => print!("{}", json_text(&r.json)),
                Format::Table => print!("{}", r.table),
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
