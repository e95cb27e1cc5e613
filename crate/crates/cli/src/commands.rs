use num_bigint::BigInt;
use rayon::prelude::*;

use intform::combinatorics::{
    b_composition_product, b_value, index_formula_corrected, index_formula_value, monomial_norm_product,
    n_exponent, n_exponent_literal, s_value, weight_vectors,
};
use intform::detengine::det_report;
use intform::fock::{gram_matrix, monomial_basis, scaled_block_index, scaled_weight_index};
use intform::linalg::{bareiss_determinant, RatMatrix};
use intform::schur::{index_a_over_b, verify_b_subring_of_a};
use intform::voa::voa_report;
use intform::{DetReport, Error, ExponentMode, IntegerLattice, VoaDetReport};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::table::{Cell, Record};

/// Rows to emit, messages for standard error, and the exit status.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub records: Vec<Record>,
    pub diagnostics: Vec<String>,
    pub status: i32,
}

fn in_pool<T: Sync, R: Send>(jobs: usize, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
    // indexed collect keeps input order whatever the scheduling
    pool.install(|| items.par_iter().map(f).collect())
}

fn joined_modes(modes: &[ExponentMode]) -> String {
    if modes.is_empty() {
        return "none".into();
    }
    modes.iter().map(ToString::to_string).collect::<Vec<_>>().join("|")
}

pub fn cmd_snk(k: u32, n_max: u32) -> Result<Outcome, CliError> {
    if k == 0 {
        return Err(CliError::Validation("--k must be at least 1".into()));
    }
    let mut out = Outcome::default();
    for n in 0..=n_max {
        let s = s_value(k, n).map_err(|e| CliError::Validation(e.to_string()))?;
        let literal = match index_formula_value(k, n) {
            Ok(v) => Cell::from(&v),
            Err(e) => Cell::from(format!("undefined: {e}")),
        };
        let corrected = match index_formula_corrected(k, n) {
            Ok(v) => Cell::from(&v),
            Err(e) => Cell::from(format!("undefined: {e}")),
        };
        out.records.push(
            Record::new()
                .with("k", k)
                .with("n", n)
                .with("S", s)
                .with("b_n", &b_value(n))
                .with("index_formula_value", literal)
                .with("index_corrected", corrected),
        );
    }
    Ok(out)
}

fn single_lattice(cfg: &RunConfig) -> Result<&IntegerLattice, CliError> {
    match cfg.lattices.as_slice() {
        [l] => Ok(l),
        _ => Err(CliError::Validation("exactly one --lattice is required".into())),
    }
}

fn closed_columns(mut r: Record, modes: &[ExponentMode], s: &BigInt, two_s: &BigInt) -> Record {
    for m in modes {
        r = match m {
            ExponentMode::S => r.with("closed_S", s),
            ExponentMode::TwoS => r.with("closed_2S", two_s),
        };
    }
    r
}

fn selected(matches: &[ExponentMode], modes: &[ExponentMode]) -> Vec<ExponentMode> {
    matches.iter().copied().filter(|m| modes.contains(m)).collect()
}

fn det_m1_record(r: &DetReport, modes: &[ExponentMode]) -> Record {
    let rec =
        Record::new().with("lattice", r.lattice.as_str()).with("n", r.n).with("oracle_det", &r.oracle_det);
    closed_columns(rec, modes, &r.closed_s, &r.closed_2s)
        .with("matches", joined_modes(&selected(&r.matches, modes)))
        .with("index_a_b", &r.index_a_b)
        .with("gram_sign", r.gram_sign)
        .with("index_identity_setup", r.index_identity_setup.as_str())
        .with("index_identity_holds", r.index_identity_holds)
}

fn det_voa_record(r: &VoaDetReport, modes: &[ExponentMode]) -> Record {
    let shells = r.shells.iter().map(|c| format!("{}:{}", c.norm, c.count)).collect::<Vec<_>>().join("|");
    let rec = Record::new()
        .with("lattice", r.lattice.as_str())
        .with("n", r.n)
        .with("rank", r.rank)
        .with("shells", shells)
        .with("oracle_det", &r.oracle_det)
        .with("full_gram_det", &r.full_gram_det);
    closed_columns(rec, modes, &r.closed_s, &r.closed_2s)
        .with("matches", joined_modes(&selected(&r.matches, modes)))
        .with("gram_sign", r.gram_sign)
}

/// Per-weight rows; weights that fail to compute become diagnostics and
/// force status 1, as does any row matching none of the selected modes.
fn stream<R: Send>(
    cfg: &RunConfig,
    lattice: &IntegerLattice,
    compute: impl Fn(u32) -> intform::Result<R> + Sync + Send,
    matches: impl Fn(&R) -> Vec<ExponentMode>,
    record: impl Fn(&R) -> Record,
) -> Outcome {
    let ns: Vec<u32> = (0..=cfg.n_max).collect();
    let results = in_pool(cfg.jobs, &ns, |&n| compute(n));
    let mut out = Outcome::default();
    for (n, res) in ns.iter().zip(results) {
        match res {
            Ok(r) => {
                if selected(&matches(&r), &cfg.modes).is_empty() {
                    out.status = 1;
                }
                out.records.push(record(&r));
            }
            Err(e) => {
                out.status = 1;
                out.diagnostics.push(format!("{} n={n}: {e}", lattice.name()));
            }
        }
    }
    out
}

pub fn cmd_det_m1(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let l = single_lattice(cfg)?;
    Ok(stream(
        cfg,
        l,
        |n| det_report(l, n, cfg.budget),
        |r| r.matches.clone(),
        |r| det_m1_record(r, &cfg.modes),
    ))
}

pub fn cmd_det_voa(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let l = single_lattice(cfg)?;
    if !l.is_even() {
        return Err(CliError::Validation(format!("{}: {}", l.name(), Error::OddLattice)));
    }
    Ok(stream(
        cfg,
        l,
        |n| voa_report(l, n, cfg.budget),
        |r| r.matches.clone(),
        |r| det_voa_record(r, &cfg.modes),
    ))
}

pub const DEFAULT_GRID: [&str; 4] = ["Z2", "A1", "A2", "A1A1"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    /// Must hold; failures set exit status 1.
    Structural,
    /// A formula taken literally, reported but not required.
    Adjudication,
    Summary,
}

impl Kind {
    fn as_str(self) -> &'static str {
        match self {
            Kind::Structural => "structural",
            Kind::Adjudication => "adjudication",
            Kind::Summary => "summary",
        }
    }
}

#[derive(Clone, Debug)]
struct Check {
    name: &'static str,
    kind: Kind,
    subject: String,
    n: u32,
    status: &'static str,
    expected: String,
    observed: String,
}

impl Check {
    fn compare(
        name: &'static str,
        kind: Kind,
        subject: String,
        n: u32,
        expected: String,
        observed: String,
    ) -> Self {
        let status = if expected == observed { "pass" } else { "fail" };
        Check { name, kind, subject, n, status, expected, observed }
    }

    fn error(name: &'static str, kind: Kind, subject: String, n: u32, e: &Error) -> Self {
        Check { name, kind, subject, n, status: "error", expected: String::new(), observed: e.to_string() }
    }

    fn record(&self) -> Record {
        Record::new()
            .with("check", self.name)
            .with("kind", self.kind.as_str())
            .with("subject", self.subject.as_str())
            .with("n", self.n)
            .with("status", self.status)
            .with("expected", self.expected.as_str())
            .with("observed", self.observed.as_str())
    }
}

#[derive(Clone, Debug)]
enum Task {
    Subring { k: u32, n: u32 },
    Index { k: u32, n: u32 },
    BGram { k: u32, n: u32 },
    Scaling { k: u32, n: u32, p: i64 },
    Heisenberg { lattice: usize, n: u32 },
    Voa { lattice: usize, n: u32 },
}

#[derive(Default)]
struct TaskOutput {
    checks: Vec<Check>,
    /// Modes matching the oracle, for determinant checks.
    matches: Option<Vec<ExponentMode>>,
}

fn valuation(mut x: BigInt, p: i64) -> Option<u64> {
    let p = BigInt::from(p);
    let zero = BigInt::from(0);
    if x == zero {
        return None;
    }
    let mut v = 0;
    while (&x % &p) == zero {
        x /= &p;
        v += 1;
    }
    Some(v)
}

fn run_task(task: &Task, lattices: &[IntegerLattice], modes: &[ExponentMode], budget: usize) -> TaskOutput {
    let mut out = TaskOutput::default();
    let k_subject = |k: u32| format!("k={k}");
    match *task {
        Task::Subring { k, n } => out.checks.push(match verify_b_subring_of_a(k, n, budget) {
            Ok(ok) => {
                Check::compare("subring", Kind::Structural, k_subject(k), n, "true".into(), ok.to_string())
            }
            Err(e) => Check::error("subring", Kind::Structural, k_subject(k), n, &e),
        }),
        Task::Index { k, n } => match index_a_over_b(k, n, budget) {
            Ok(oracle) => {
                let corrected = index_formula_corrected(k, n).map(|v| v.to_string());
                let literal = index_formula_value(k, n).map(|v| v.to_string());
                out.checks.push(Check::compare(
                    "index_corrected",
                    Kind::Structural,
                    k_subject(k),
                    n,
                    corrected.unwrap_or_else(|e| e.to_string()),
                    oracle.to_string(),
                ));
                out.checks.push(Check::compare(
                    "index_literal",
                    Kind::Adjudication,
                    k_subject(k),
                    n,
                    literal.unwrap_or_else(|e| e.to_string()),
                    oracle.to_string(),
                ));
            }
            Err(e) => {
                out.checks.push(Check::error("index_corrected", Kind::Structural, k_subject(k), n, &e));
                out.checks.push(Check::error("index_literal", Kind::Adjudication, k_subject(k), n, &e));
            }
        },
        Task::BGram { k, n } => {
            let det = (|| {
                let basis = monomial_basis(k, n);
                if basis.len() > budget {
                    return Err(Error::Budget { dim: basis.len(), budget });
                }
                let g = gram_matrix(&basis.elements(), &RatMatrix::identity(k as usize))?;
                Ok(bareiss_determinant(&g.to_integer()?)?.magnitude().clone())
            })();
            match det {
                Ok(d) => {
                    out.checks.push(Check::compare(
                        "b_gram_det",
                        Kind::Structural,
                        k_subject(k),
                        n,
                        monomial_norm_product(k, n).to_string(),
                        d.to_string(),
                    ));
                    out.checks.push(Check::compare(
                        "b_gram_literal",
                        Kind::Adjudication,
                        k_subject(k),
                        n,
                        b_composition_product(k, n).to_string(),
                        d.to_string(),
                    ));
                }
                Err(e) => {
                    out.checks.push(Check::error("b_gram_det", Kind::Structural, k_subject(k), n, &e));
                    out.checks.push(Check::error("b_gram_literal", Kind::Adjudication, k_subject(k), n, &e));
                }
            }
        }
        Task::Scaling { k, n, p } => {
            let subject = format!("k={k} p={p}");
            let blocks = (|| {
                let dim = monomial_basis(k, n).len();
                if dim > budget {
                    return Err(Error::Budget { dim, budget });
                }
                weight_vectors(n)
                    .into_iter()
                    .map(|a| {
                        let idx = scaled_block_index(k, &a, &vec![p; k as usize])?;
                        Ok((n_exponent(k, &a), n_exponent_literal(k, &a), valuation(idx, p)))
                    })
                    .collect::<intform::Result<Vec<_>>>()
            })();
            let fmt = |xs: Vec<String>| if xs.is_empty() { "-".to_string() } else { xs.join("|") };
            match blocks {
                Ok(rows) => {
                    let observed =
                        fmt(rows.iter().map(|r| r.2.map_or("0".into(), |v| v.to_string())).collect());
                    out.checks.push(Check::compare(
                        "scaling_all",
                        Kind::Structural,
                        subject.clone(),
                        n,
                        fmt(rows.iter().map(|r| r.0.to_string()).collect()),
                        observed.clone(),
                    ));
                    out.checks.push(Check::compare(
                        "scaling_all_literal",
                        Kind::Adjudication,
                        subject.clone(),
                        n,
                        fmt(rows.iter().map(|r| r.1.to_string()).collect()),
                        observed,
                    ));
                }
                Err(e) => {
                    out.checks.push(Check::error("scaling_all", Kind::Structural, subject.clone(), n, &e));
                    out.checks.push(Check::error(
                        "scaling_all_literal",
                        Kind::Adjudication,
                        subject.clone(),
                        n,
                        &e,
                    ));
                }
            }
            let mut scales = vec![1; k as usize];
            scales[0] = p;
            out.checks.push(match (scaled_weight_index(k, n, &scales, budget), s_value(k, n)) {
                (Ok(idx), Ok(s)) => Check::compare(
                    "scaling_single",
                    Kind::Structural,
                    subject,
                    n,
                    s.to_string(),
                    valuation(idx, p).map_or("0".into(), |v| v.to_string()),
                ),
                (Err(e), _) | (_, Err(e)) => Check::error("scaling_single", Kind::Structural, subject, n, &e),
            });
        }
        Task::Heisenberg { lattice, n } => {
            let l = &lattices[lattice];
            let subject = l.name().to_string();
            match det_report(l, n, budget) {
                Ok(r) => {
                    push_mode_checks(
                        &mut out,
                        "det_al",
                        &subject,
                        n,
                        modes,
                        &r.oracle_det,
                        &r.closed_s,
                        &r.closed_2s,
                    );
                    out.checks.push(Check::compare(
                        "index_identity",
                        Kind::Structural,
                        format!("{subject} via {}", r.index_identity_setup),
                        n,
                        "true".into(),
                        r.index_identity_holds.to_string(),
                    ));
                    out.matches = Some(r.matches);
                }
                Err(e) => out.checks.push(Check::error("det_al", Kind::Structural, subject, n, &e)),
            }
        }
        Task::Voa { lattice, n } => {
            let l = &lattices[lattice];
            let subject = l.name().to_string();
            match voa_report(l, n, budget) {
                Ok(r) => {
                    push_mode_checks(
                        &mut out,
                        "det_voa",
                        &subject,
                        n,
                        modes,
                        &r.oracle_det,
                        &r.closed_s,
                        &r.closed_2s,
                    );
                    out.matches = Some(r.matches);
                }
                Err(e) => out.checks.push(Check::error("det_voa", Kind::Structural, subject, n, &e)),
            }
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn push_mode_checks(
    out: &mut TaskOutput,
    name: &'static str,
    subject: &str,
    n: u32,
    modes: &[ExponentMode],
    oracle: &BigInt,
    s: &BigInt,
    two_s: &BigInt,
) {
    for m in modes {
        let (name, kind, closed) = match m {
            ExponentMode::S => (name, Kind::Structural, s),
            ExponentMode::TwoS => {
                let name = if name == "det_al" { "det_al_2S" } else { "det_voa_2S" };
                (name, Kind::Adjudication, two_s)
            }
        };
        out.checks.push(Check::compare(
            name,
            kind,
            subject.to_string(),
            n,
            closed.to_string(),
            oracle.to_string(),
        ));
    }
}

/// The invariant grid: integrality, index formulas, scaling oracles and both
/// determinant formulas, collecting every failure.
pub fn cmd_verify_all(cfg: &RunConfig, k_max: u32) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let mut tasks = Vec::new();
    for k in 1..=k_max {
        for n in 0..=cfg.n_max {
            tasks.push(Task::Subring { k, n });
            tasks.push(Task::Index { k, n });
            tasks.push(Task::BGram { k, n });
            for p in [2, 3] {
                tasks.push(Task::Scaling { k, n, p });
            }
        }
    }
    for (i, l) in cfg.lattices.iter().enumerate() {
        for n in 0..=cfg.n_max {
            tasks.push(Task::Heisenberg { lattice: i, n });
        }
        if l.is_even() {
            for n in 0..=cfg.n_max {
                tasks.push(Task::Voa { lattice: i, n });
            }
        }
    }
    let outputs = in_pool(cfg.jobs, &tasks, |t| run_task(t, &cfg.lattices, &cfg.modes, cfg.budget));

    let mut checks: Vec<Check> = Vec::new();
    let mut agreed: Option<Vec<ExponentMode>> = None;
    for o in outputs {
        checks.extend(o.checks);
        if let Some(m) = o.matches {
            let m = selected(&m, &cfg.modes);
            agreed = Some(match agreed {
                None => m,
                Some(prev) => prev.into_iter().filter(|x| m.contains(x)).collect(),
            });
        }
    }

    let structural: Vec<&Check> = checks.iter().filter(|c| c.kind == Kind::Structural).collect();
    let passed = structural.iter().filter(|c| c.status == "pass").count();
    let errors = checks.iter().filter(|c| c.status == "error").count();
    let adjudicated = agreed.unwrap_or_default();
    // when both modes fit every lattice (all unimodular) nothing is decided
    let adjudicated_label = joined_modes(&adjudicated);
    let summary = [
        Check {
            name: "exponent_mode",
            kind: Kind::Summary,
            subject: "grid".into(),
            n: cfg.n_max,
            status: if adjudicated.is_empty() { "fail" } else { "pass" },
            expected: joined_modes(&cfg.modes),
            observed: adjudicated_label,
        },
        Check {
            name: "structural",
            kind: Kind::Summary,
            subject: "grid".into(),
            n: cfg.n_max,
            status: if passed == structural.len() && errors == 0 { "pass" } else { "fail" },
            expected: structural.len().to_string(),
            observed: passed.to_string(),
        },
    ];

    let mut out = Outcome::default();
    for c in checks.iter().chain(&summary) {
        if c.status == "error" {
            out.diagnostics.push(format!("{} {} n={}: {}", c.name, c.subject, c.n, c.observed));
        }
        out.records.push(c.record());
    }
    if passed != structural.len() || errors > 0 {
        out.status = 1;
    }
    Ok(out)
}
