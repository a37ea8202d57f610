use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use poincare_core::corpus::{germ_corpus, graph_corpus, GermSpec};
use poincare_core::{
    acampo_zeta, ambient_closed_form, ambient_oracle_series, ambient_series_from_graph, check_condition,
    check_lemma_equivalence, compare_toric, condition_grid, embedded_closed_form, embedded_series_from_graph,
    equal_polyhedra, expand, extract_and_recover, facet_valuations, is_bistellar, is_stellar, newton_polyhedron,
    nonbistellar_witness, on_dual_locus, oracle_series, q_vector, recover_newton, recover_newton_from_series,
    required_truncation, theta, validate_presentation, value_tuple, varchenko_zeta, zeta_from_embedded, CoefficientBox,
    Exec, FactoredSeries, Halfspace, Polynomial, TruncatedSeries, ValuationSystem, ValueTuple, WeightVector,
};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::formats::{polyhedron_json, series_json, tuple, GraphFile, PresentationFile, SeriesFile};
use crate::parse::{parse_integer_rows, parse_integers, parse_naturals, parse_polynomial, parse_weights};

/// Poincaré series of valuation filtrations, with exact cross-checks.
#[derive(Debug, Parser)]
#[command(name = "poincare", version)]
pub struct RunConfig {
    /// Print a JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Keep every loop on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Newton polyhedron, facets and the stellar / bi-stellar predicates.
    Newton {
        #[arg(long)]
        poly: PathBuf,
    },
    /// Closed form and/or oracle coefficients on a box.
    Poincare(PoincareArgs),
    /// The J-ideal intersection condition at a pair of levels, or on a grid.
    VerifyCondition(ConditionArgs),
    /// Series, zeta function and inverse recovery for a resolution graph.
    Curve(CurveArgs),
    /// Presentation checks, the map theta and the semigroup comparison.
    Toric(ToricArgs),
    /// Varchenko's zeta function, optionally against a resolution graph.
    Zeta {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Newton polyhedron from facet normals and offsets.
    RecoverNewton(RecoverArgs),
    /// Seeded random cross-checks: closed form against oracle, graph zeta two ways.
    Selfcheck {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        cases: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Closed,
    Oracle,
    Both,
}

#[derive(Debug, Args)]
pub struct PoincareArgs {
    /// Germ h; without it the ambient filtration is used.
    #[arg(long)]
    poly: Option<PathBuf>,
    /// Valuations, e.g. "2,3;4,3".
    #[arg(long)]
    weights: String,
    /// Upper corner of the coefficient box, one entry or one per valuation.
    #[arg(long = "box")]
    bounds: String,
    #[arg(long, value_enum, default_value_t = Mode::Both)]
    mode: Mode,
    /// Coefficient to report; defaults to the box corner.
    #[arg(long)]
    at: Option<String>,
}

#[derive(Debug, Args)]
pub struct ConditionArgs {
    #[arg(long)]
    poly: PathBuf,
    /// Valuations; defaults to the compact facet normals of the Newton polyhedron.
    #[arg(long)]
    weights: Option<String>,
    #[arg(long, requires = "v2", conflicts_with = "grid")]
    v1: Option<String>,
    #[arg(long, requires = "v1")]
    v2: Option<String>,
    /// Explicit truncation level T.
    #[arg(long, conflicts_with = "margin")]
    trunc: Option<String>,
    /// Added to every entry of the default truncation max(v1,v2) + q + 1.
    #[arg(long, default_value_t = 0)]
    margin: u32,
    /// Also compare with the intersection-of-ideals formulation.
    #[arg(long)]
    lemma: bool,
    /// Sweep all pairs in [0, GRID]^r instead of one pair.
    #[arg(long)]
    grid: Option<u32>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Embedded series from the graph.
    #[arg(long)]
    series: bool,
    /// A'Campo's zeta function, checked against the series route.
    #[arg(long)]
    zeta: bool,
    /// Ambient series for the divisorial valuations of these vertex ids.
    #[arg(long, value_delimiter = ',')]
    ambient: Option<Vec<String>>,
    /// Series file from which to recover q and the branch counts.
    #[arg(long)]
    recover: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ToricArgs {
    #[arg(long)]
    presentation: PathBuf,
    /// Valuations on the semigroup lattice, e.g. "1" or "1,0;0,1".
    #[arg(long)]
    nu: Option<String>,
    /// Compare semigroup and embedded series up to this degree.
    #[arg(long, requires = "nu")]
    compare: Option<u32>,
}

#[derive(Debug, Args)]
pub struct RecoverArgs {
    /// Facet normals, e.g. "3,2;1,1".
    #[arg(long)]
    normals: String,
    /// Offsets, one per normal.
    #[arg(long, required_unless_present = "series", conflicts_with = "series")]
    offsets: Option<String>,
    /// Series whose dominant numerator factor gives the offsets.
    #[arg(long)]
    series: Option<PathBuf>,
    /// Germ whose Newton polyhedron the result is compared with.
    #[arg(long)]
    poly: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Discrepancy,
}

impl Status {
    fn from_agreement(ok: bool) -> Self {
        if ok {
            Status::Ok
        } else {
            Status::Discrepancy
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Discrepancy => 2,
        }
    }
}

#[derive(Debug)]
pub struct Report {
    pub status: Status,
    pub lines: Vec<String>,
    pub json: Value,
}

impl Report {
    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            format!("{}\n", serde_json::to_string_pretty(&self.json).expect("plain data"))
        } else {
            self.lines.iter().map(|l| format!("{l}\n")).collect()
        }
    }
}

/// Input problems; every one of them exits with status 1.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<poincare_core::Error> for InputError {
    fn from(e: poincare_core::Error) -> Self {
        InputError(e.to_string())
    }
}

impl From<String> for InputError {
    fn from(e: String) -> Self {
        InputError(e)
    }
}

type Outcome = Result<Report, InputError>;

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn read_poly(path: &Path) -> Result<Polynomial, InputError> {
    let (p, _) = parse_polynomial(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok(p)
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    serde_json::from_str(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn system(text: &str) -> Result<ValuationSystem, InputError> {
    let rows = parse_weights(text)?.into_iter().map(WeightVector::new).collect::<poincare_core::Result<Vec<_>>>()?;
    Ok(ValuationSystem::new(rows)?)
}

fn value(text: &str) -> Result<ValueTuple, InputError> {
    Ok(ValueTuple::new(parse_integers(text)?))
}

fn coefficient_box(text: &str, rank: usize) -> Result<CoefficientBox, InputError> {
    let b = parse_naturals(text)?;
    match b.len() {
        1 => Ok(CoefficientBox::cube(rank, b[0])),
        n if n == rank => Ok(CoefficientBox::new(b)),
        n => Err(InputError(format!("box has {n} entries for {rank} valuations"))),
    }
}

fn coefficients_json(s: &TruncatedSeries) -> Value {
    s.nonzero().map(|(v, c)| json!([v, c.to_string()])).collect()
}

pub fn run(cfg: &RunConfig) -> Outcome {
    let exec = if cfg.sequential { Exec::Sequential } else { Exec::Parallel };
    match &cfg.command {
        Command::Newton { poly } => newton(&read_poly(poly)?),
        Command::Poincare(a) => poincare(a, exec),
        Command::VerifyCondition(a) => verify_condition(a, exec),
        Command::Curve(a) => curve(a),
        Command::Toric(a) => toric(a, exec),
        Command::Zeta { poly, graph } => zeta(&read_poly(poly)?, graph.as_deref()),
        Command::RecoverNewton(a) => recover(a),
        Command::Selfcheck { seed, cases } => selfcheck(*seed, *cases, exec),
    }
}

fn newton(h: &Polynomial) -> Outcome {
    let np = newton_polyhedron(h)?;
    let mut lines = vec![format!("polynomial: {h}")];
    lines.extend(np.to_string().lines().map(str::to_string));
    let mut json = json!({ "polynomial": h.to_string(), "polyhedron": polyhedron_json(&np) });
    if np.has_compact_facet() {
        let (stellar, bistellar) = (is_stellar(&np)?, is_bistellar(&np)?);
        lines.push(format!("stellar: {}", yes_no(stellar)));
        lines.push(format!("bi-stellar: {}", yes_no(bistellar)));
        json["stellar"] = json!(stellar);
        json["bistellar"] = json!(bistellar);
        if let Some(w) = nonbistellar_witness(h)? {
            lines.push(format!(
                "disjoint compact facets: normals {} and {}, face part {}",
                w.first_normal, w.second_normal, w.face_part
            ));
            json["witness"] = json!({
                "normals": [w.first_normal.entries(), w.second_normal.entries()],
                "face_part": w.face_part.to_string(),
            });
        }
    } else {
        lines.push("no compact facet".into());
    }
    Ok(Report { status: Status::Ok, lines, json })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn poincare(a: &PoincareArgs, exec: Exec) -> Outcome {
    let sys = system(&a.weights)?;
    let h = a.poly.as_deref().map(read_poly).transpose()?;
    let bounds = coefficient_box(&a.bounds, sys.rank())?;
    let at = match &a.at {
        Some(t) => parse_naturals(t)?,
        None => bounds.bound().to_vec(),
    };
    if !bounds.contains(&at) {
        return Err(InputError(format!("{} lies outside the box {}", tuple(&at), tuple(bounds.bound()))));
    }

    let mut lines = Vec::new();
    let mut json = json!({ "box": bounds.bound(), "mode": format!("{:?}", a.mode).to_lowercase() });
    let closed = if a.mode != Mode::Oracle {
        let f = match &h {
            Some(h) => embedded_closed_form(&sys, h)?,
            None => ambient_closed_form(&sys)?,
        };
        lines.push(format!("closed form: {f}"));
        json["closed_form"] = series_json(&f);
        Some(expand(&f, &bounds, exec)?)
    } else {
        None
    };
    let oracle = if a.mode != Mode::Closed {
        Some(match &h {
            Some(h) => oracle_series(&sys, h, &bounds, exec)?,
            None => ambient_oracle_series(&sys, &bounds, exec)?,
        })
    } else {
        None
    };
    lines.push(format!("box: {}", tuple(bounds.bound())));

    let shown = closed.as_ref().or(oracle.as_ref()).expect("some mode");
    lines.push(format!("coefficient {} = {}", tuple(&at), shown.coefficient(&at)));
    json["at"] = json!({ "v": at, "c": shown.coefficient(&at).to_string() });
    json["coefficients"] = coefficients_json(shown);

    let mut status = Status::Ok;
    if let (Some(c), Some(o)) = (&closed, &oracle) {
        match c.first_difference(o) {
            None => {
                lines.push("report: identical".into());
                json["report"] = json!("identical");
            }
            Some((v, x, y)) => {
                lines.push(format!("report: differ at {}: closed form {x}, oracle {y}", tuple(&v)));
                json["report"] = json!({ "differ_at": v, "closed": x.to_string(), "oracle": y.to_string() });
                status = Status::Discrepancy;
            }
        }
    }
    Ok(Report { status, lines, json })
}

fn compact_facet_system(h: &Polynomial) -> Result<ValuationSystem, InputError> {
    let np = newton_polyhedron(h)?;
    let rows: Vec<WeightVector> = facet_valuations(&np, false).into_iter().map(|f| f.normal).collect();
    if rows.is_empty() {
        return Err(poincare_core::Error::NoCompactFacet.into());
    }
    Ok(ValuationSystem::new(rows)?)
}

fn verify_condition(a: &ConditionArgs, exec: Exec) -> Outcome {
    let h = read_poly(&a.poly)?;
    let sys = match &a.weights {
        Some(w) => system(w)?,
        None => compact_facet_system(&h)?,
    };
    let np = newton_polyhedron(&h)?;
    let bistellar = np.has_compact_facet() && is_bistellar(&np)?;
    let names: Vec<String> = sys.valuations().iter().map(|w| w.to_string()).collect();
    let mut lines = vec![format!("valuations: {}", names.join(" ")), format!("bi-stellar: {}", yes_no(bistellar))];
    let mut json = json!({ "valuations": names, "bistellar": bistellar });

    if let Some(bound) = a.grid {
        let report = condition_grid(&sys, &h, bound, a.lemma, exec)?;
        lines.push(format!("pairs: {}", report.pairs));
        lines.push(format!("violations: {}", report.violations.len()));
        let pair = |(x, y): &(ValueTuple, ValueTuple)| json!([x.entries(), y.entries()]);
        json["pairs"] = json!(report.pairs);
        json["violations"] = report.violations.iter().map(pair).collect();
        if a.lemma {
            lines.push(format!("lemma disagreements: {}", report.disagreements.len()));
            json["lemma_disagreements"] = report.disagreements.iter().map(pair).collect();
        }
        let ok = report.disagreements.is_empty() && !(bistellar && !report.violations.is_empty());
        return Ok(Report { status: Status::from_agreement(ok), lines, json });
    }

    let (Some(v1), Some(v2)) = (&a.v1, &a.v2) else {
        return Err(InputError("give --v1 and --v2, or --grid".into()));
    };
    let (v1, v2) = (value(v1)?, value(v2)?);
    let q = value_tuple(&sys, &h)?;
    let trunc = match &a.trunc {
        Some(t) => value(t)?,
        None => required_truncation(&v1, &v2, &q).offset(&vec![a.margin as i64; sys.rank()]),
    };
    let report = check_condition(&sys, &h, &v1, &v2, Some(&trunc))?;
    let levels: Vec<String> = report.levels.iter().map(|t| tuple(t.entries())).collect();
    lines.push(format!("v1: {}  v2: {}  q: {}", tuple(v1.entries()), tuple(v2.entries()), tuple(q.entries())));
    lines.push(format!("verdict: {}", report.verdict));
    lines.push(format!("truncations: {}", levels.join(" ")));
    lines.push(format!("excess: {}", tuple(&report.excess)));
    json["q"] = json!(q.entries());
    json["verdict"] = json!(report.verdict.to_string());
    json["truncations"] = report.levels.iter().map(|t| json!(t.entries())).collect();
    json["excess"] = json!(report.excess);
    let violated = report.verdict == poincare_core::Verdict::Violated;
    let mut ok = !(bistellar && violated);
    if a.lemma {
        let lemma = check_lemma_equivalence(&sys, &h, &v1, &v2, Some(&trunc))?;
        lines.push(format!(
            "lemma: {} (dimensions {} and {})",
            if lemma.agree() { "agrees" } else { "disagrees" },
            lemma.dims.0,
            lemma.dims.1
        ));
        json["lemma"] = json!({ "agrees": lemma.agree(), "dims": [lemma.dims.0, lemma.dims.1] });
        ok &= lemma.agree();
    }
    Ok(Report { status: Status::from_agreement(ok), lines, json })
}

fn curve(a: &CurveArgs) -> Outcome {
    let g = read_json::<GraphFile>(&a.graph)?.to_graph()?;
    let everything = !a.series && !a.zeta && a.ambient.is_none() && a.recover.is_none();
    let mut lines = Vec::new();
    let mut json = json!({});
    let mut status = Status::Ok;
    if a.series || everything {
        let pv = embedded_series_from_graph(&g)?;
        lines.push(format!("series: {pv}"));
        json["series"] = series_json(&pv);
    }
    if a.zeta || everything {
        let z = acampo_zeta(&g)?;
        let rees = g.rees();
        let n: Vec<u32> = rees.iter().map(|&i| g.arrows()[i]).collect();
        let via = zeta_from_embedded(&embedded_series_from_graph(&g)?, &n, &q_vector(&g, &rees))?;
        lines.push(format!("zeta: {z}"));
        json["zeta"] = series_json(&z);
        if via != z {
            lines.push(format!("zeta from the series differs: {via}"));
            json["zeta_from_series"] = series_json(&via);
            status = Status::Discrepancy;
        }
    }
    if let Some(ids) = &a.ambient {
        let subset = ids
            .iter()
            .map(|id| g.position(id).ok_or_else(|| InputError(format!("unknown vertex `{id}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        let f = ambient_series_from_graph(&g, &subset)?;
        lines.push(format!("ambient series: {f}"));
        json["ambient"] = series_json(&f);
    }
    if let Some(path) = &a.recover {
        let pv = read_json::<SeriesFile>(path)?.to_series()?;
        let (q, n) = extract_and_recover(&pv, &g)?;
        let rees: Vec<&str> = g.rees().iter().map(|&i| g.ids()[i].as_str()).collect();
        lines.push(format!("recovered q: {}", tuple(q.entries())));
        lines.push(format!(
            "recovered branches: {}",
            rees.iter().zip(&n).map(|(id, k)| format!("{id}:{k}")).collect::<Vec<_>>().join(" ")
        ));
        json["recovered"] = json!({
            "q": q.entries(),
            "arrows": rees.iter().zip(&n).map(|(id, k)| (id.to_string(), json!(k))).collect::<serde_json::Map<_, _>>(),
        });
    }
    Ok(Report { status, lines, json })
}

fn toric(a: &ToricArgs, exec: Exec) -> Outcome {
    let sp = read_json::<PresentationFile>(&a.presentation)?.to_presentation()?;
    let report = validate_presentation(&sp);
    if !report.is_valid() {
        let mut problems = Vec::new();
        for (i, a, b) in &report.degree_mismatches {
            problems.push(format!("binomial {i} has degrees {} and {}", tuple(a), tuple(b)));
        }
        for i in &report.overlapping_supports {
            problems.push(format!("binomial {i} has monomials sharing a variable"));
        }
        if let Some(c) = &report.non_pointed {
            problems.push(format!("generators satisfy the relation {} (semigroup not pointed)", tuple(c)));
        }
        return Err(InputError(format!("invalid presentation: {}", problems.join("; "))));
    }
    let mut lines = vec![format!(
        "presentation: d = {}, {} generators, {} binomials: valid",
        sp.d(),
        sp.generators().len(),
        sp.p()
    )];
    let mut json = json!({ "valid": true });
    let mut status = Status::Ok;
    if let Some(text) = &a.nu {
        let nus = parse_integer_rows(text)?;
        let mut thetas = Vec::new();
        for nu in &nus {
            let mu = theta(&sp, nu)?;
            let dual = on_dual_locus(&sp, &mu);
            lines.push(format!("theta{} = {} (dual locus: {})", tuple(nu), tuple(&mu), yes_no(dual)));
            thetas.push(json!({ "nu": nu, "theta": mu, "dual_locus": dual }));
        }
        json["theta"] = json!(thetas);
        if let Some(deg) = a.compare {
            let cmp = compare_toric(&sp, &nus, &CoefficientBox::cube(nus.len(), deg), exec)?;
            match cmp.semigroup.first_difference(&cmp.embedded) {
                None => {
                    lines.push(format!("compare through degree {deg}: identical"));
                    json["compare"] = json!("identical");
                }
                Some((v, x, y)) => {
                    lines.push(format!("compare: differ at {}: semigroup {x}, embedded {y}", tuple(&v)));
                    json["compare"] = json!({ "differ_at": v, "semigroup": x.to_string(), "embedded": y.to_string() });
                    status = Status::Discrepancy;
                }
            }
        }
    }
    Ok(Report { status, lines, json })
}

fn zeta(h: &Polynomial, graph: Option<&Path>) -> Outcome {
    let z = varchenko_zeta(h)?;
    let mut lines = vec![format!("varchenko: {z}")];
    let mut json = json!({ "varchenko": series_json(&z) });
    let mut status = Status::Ok;
    if let Some(path) = graph {
        let g = read_json::<GraphFile>(path)?.to_graph()?;
        let other = acampo_zeta(&g)?;
        let same = other == z;
        lines.push(format!("graph: {other}"));
        lines.push(format!("report: {}", if same { "identical" } else { "different" }));
        json["graph"] = series_json(&other);
        json["report"] = json!(if same { "identical" } else { "different" });
        status = Status::from_agreement(same);
    }
    Ok(Report { status, lines, json })
}

fn recover(a: &RecoverArgs) -> Outcome {
    let normals =
        parse_weights(&a.normals)?.into_iter().map(WeightVector::new).collect::<poincare_core::Result<Vec<_>>>()?;
    let np = match (&a.offsets, &a.series) {
        (Some(o), _) => {
            let offsets = parse_integers(o)?;
            if offsets.len() != normals.len() {
                return Err(InputError(format!("{} offsets for {} normals", offsets.len(), normals.len())));
            }
            let rows: Vec<Halfspace> =
                normals.into_iter().zip(offsets).map(|(normal, offset)| Halfspace { normal, offset }).collect();
            recover_newton(&rows)?
        }
        (None, Some(path)) => recover_newton_from_series(&read_json::<SeriesFile>(path)?.to_series()?, &normals, &[])?,
        (None, None) => unreachable!("clap requires one of them"),
    };
    let mut lines: Vec<String> = np.to_string().lines().map(str::to_string).collect();
    let mut json = json!({ "polyhedron": polyhedron_json(&np) });
    let mut status = Status::Ok;
    if let Some(path) = &a.poly {
        let same = equal_polyhedra(&np, &newton_polyhedron(&read_poly(path)?)?);
        lines.push(format!("report: {}", if same { "identical" } else { "different" }));
        json["report"] = json!(if same { "identical" } else { "different" });
        status = Status::from_agreement(same);
    }
    Ok(Report { status, lines, json })
}

fn selfcheck(seed: u64, cases: usize, exec: Exec) -> Outcome {
    let mut failures = Vec::new();
    for (i, case) in germ_corpus(seed, cases, GermSpec::default()).iter().enumerate() {
        let b = CoefficientBox::cube(case.sys.rank(), 10);
        let closed = expand(&embedded_closed_form(&case.sys, &case.h)?, &b, exec)?;
        if let Some((v, _, _)) = closed.first_difference(&oracle_series(&case.sys, &case.h, &b, exec)?) {
            failures.push(format!("germ case {i} ({}): series differ at {}", case.h, tuple(&v)));
        }
    }
    for (i, g) in graph_corpus(seed, cases, 6).iter().enumerate() {
        let rees = g.rees();
        let n: Vec<u32> = rees.iter().map(|&k| g.arrows()[k]).collect();
        let via: FactoredSeries = zeta_from_embedded(&embedded_series_from_graph(g)?, &n, &q_vector(g, &rees))?;
        if via != acampo_zeta(g)? {
            failures.push(format!("graph case {i}: zeta functions differ"));
        }
    }
    let mut lines =
        vec![format!("seed {seed}: {cases} germ cases, {cases} graph cases"), format!("failures: {}", failures.len())];
    lines.extend(failures.iter().cloned());
    let json = json!({ "seed": seed, "cases": cases, "failures": failures });
    Ok(Report { status: Status::from_agreement(failures.is_empty()), lines, json })
}
