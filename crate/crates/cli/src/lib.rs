//! Batch verification harness behind `latdiag verify`.
//!
//! Cases are enumerated deterministically, run on a bounded worker pool, and
//! appended one JSON line at a time to a progress log through a single
//! writer. A rerun with the same log skips every id already recorded. The
//! final report is sorted by id and carries no timing, so two runs over the
//! same inputs produce identical bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use latdiag::bases::{build_b, verify_b};
use latdiag::combinatorics::{count_t, depth_tuples_distinct};
use latdiag::determinant::delta;
use latdiag::diagrams::{binomial, factorial, k_subsets};
use latdiag::polycore::{rat, Alphabet, Bidegree};
use latdiag::shiftops::{direct_apply, shift_apply, ShiftOp};
use latdiag::spaces::{
    annihilator_basis, build_mkij, default_parameters, derivative_closure, ideal_member_direct,
    interpolate_annihilators, interpolation_degree, mkij_bound, monomials_of_bidegree, orbit_points,
    orbit_vanishing_transfer, sum_spaces, IntersectionTargets,
};
use latdiag::{Cell, LatticeDiagram, Partition, Polynomial};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Environment variable naming the default directory for reports and progress logs.
pub const OUT_DIR_ENV: &str = "LATDIAG_OUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// dim M_mu = n!
    Nfact,
    /// dim M^k_{i,j} <= C(s,k) n!
    Bound,
    /// dim M^k_{i,j} = C(s,k) n!, reported as a finding when it fails
    Conjecture,
    /// M^1_{i,j} is the closure of the single one-hole determinant
    OneHole,
    /// direct ideal membership agrees with the intersection route
    IdealEq,
    /// the two-hole non-membership example and the two-generator description of M^2
    TwoHoleCounterexample,
    /// the explicit basis of the X-part
    Xpart,
    /// depth tuples over the selections are pairwise distinct
    DepthLemma,
    /// orbit cardinality and vanishing transfer
    Orbit,
    /// shift-operator expansions against direct differentiation
    Shift,
}

impl Check {
    pub const ALL: [Check; 10] = [
        Check::Nfact,
        Check::Bound,
        Check::Conjecture,
        Check::OneHole,
        Check::IdealEq,
        Check::TwoHoleCounterexample,
        Check::Xpart,
        Check::DepthLemma,
        Check::Orbit,
        Check::Shift,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Nfact => "nfact",
            Check::Bound => "bound",
            Check::Conjecture => "conjecture",
            Check::OneHole => "one-hole",
            Check::IdealEq => "ideal-eq",
            Check::TwoHoleCounterexample => "two-hole-counterexample",
            Check::Xpart => "xpart",
            Check::DepthLemma => "depth-lemma",
            Check::Orbit => "orbit",
            Check::Shift => "shift",
        }
    }

    /// Checks that only touch the X alphabet get a larger default budget.
    pub fn default_max_size(self) -> usize {
        match self {
            Check::Xpart | Check::DepthLemma => 6,
            _ => 5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Finding,
}

impl Status {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// One verified case: a shape (or diagram), optional anchor and hole count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case {
    pub subject: String,
    pub cell: Option<Cell>,
    pub k: Option<usize>,
}

impl Case {
    fn id(&self, check: Check) -> String {
        let mut s = format!("{}/{}", check.name(), self.subject);
        if let Some(c) = self.cell {
            s += &format!("/{c}");
        }
        if let Some(k) = self.k {
            s += &format!("/k={k}");
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub id: String,
    pub check: Check,
    pub case: Case,
    pub status: Status,
    pub values: BTreeMap<String, Value>,
    /// Milliseconds; kept in the progress log, dropped from reports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub checks: Vec<Check>,
    /// Overrides every per-check default budget when set.
    pub max_size: Option<usize>,
    pub seed: u64,
    pub jobs: usize,
    pub trials: usize,
    pub orbit_trials: usize,
    /// Refuse to start when the estimated cost exceeds this many work units.
    pub cost_ceiling: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            checks: Check::ALL.to_vec(),
            max_size: None,
            seed: 0,
            jobs: 1,
            trials: 200,
            orbit_trials: 20,
            cost_ceiling: 2e9,
        }
    }
}

impl SuiteConfig {
    pub fn budget(&self, check: Check) -> usize {
        self.max_size.unwrap_or(check.default_max_size())
    }
}

fn anchored_cases(max: usize, min_size: usize, ks: impl Fn(&Partition, usize) -> Vec<usize>) -> Vec<Case> {
    let mut out = Vec::new();
    for mu in Partition::up_to(max).into_iter().filter(|m| m.size() >= min_size) {
        for &c in mu.cells().cells() {
            let s = mu.shadow_size(c).expect("cell of mu");
            for k in ks(&mu, s) {
                out.push(Case { subject: mu.to_string(), cell: Some(c), k: Some(k) });
            }
        }
    }
    out
}

fn proper_ks(mu: &Partition, s: usize) -> Vec<usize> {
    (0..=s.min(mu.size() - 1)).collect()
}

const SHIFT_BOX: usize = 4;

/// Deterministic case list for one check.
pub fn enumerate_cases(check: Check, max: usize) -> Vec<Case> {
    match check {
        Check::Nfact => Partition::up_to(max)
            .into_iter()
            .map(|mu| Case { subject: mu.to_string(), cell: None, k: None })
            .collect(),
        Check::Bound | Check::Conjecture | Check::IdealEq => anchored_cases(max, 1, proper_ks),
        Check::OneHole => anchored_cases(max, 2, |_, _| vec![1]),
        Check::TwoHoleCounterexample => vec![Case { subject: "3,2".into(), cell: Some(Cell::new(0, 0)), k: Some(2) }],
        Check::Xpart => anchored_cases(max, 1, |mu, s| (0..=s.min(mu.size() - 1).min(3)).collect()),
        Check::DepthLemma => anchored_cases(max, 1, |_, s| (0..=s.min(4)).collect()),
        Check::Orbit => anchored_cases(max, 1, |_, s| (0..=s).collect()),
        Check::Shift => {
            let boxed: Vec<Cell> = (0..SHIFT_BOX).flat_map(|p| (0..SHIFT_BOX).map(move |q| Cell::new(p, q))).collect();
            let mut out = Vec::new();
            for m in 1..=max.min(boxed.len()) {
                for cells in k_subsets(&boxed, m) {
                    let d = LatticeDiagram::new(cells).expect("distinct cells");
                    for k in 1..=3 {
                        out.push(Case { subject: d.to_string(), cell: None, k: Some(k) });
                    }
                }
            }
            out
        }
    }
}

/// Rough work units for one case: the square of the largest space dimension
/// involved, times the trial count for ideal equality, and the cube of the
/// point count for orbit interpolation.
pub fn estimate_cost(check: Check, case: &Case, cfg: &SuiteConfig) -> f64 {
    let k = case.k.unwrap_or(0);
    let size_of = |subject: &str| -> usize {
        subject.parse::<Partition>().map(|m| m.size()).unwrap_or(SHIFT_BOX * SHIFT_BOX)
    };
    match check {
        Check::Shift => {
            let n = subject_cells(&case.subject);
            (factorial(n) as f64) * 3.0
        }
        Check::DepthLemma => {
            let n = size_of(&case.subject);
            binomial(n, k) as f64
        }
        Check::Xpart => {
            let mu: Partition = case.subject.parse().expect("partition subject");
            let c = case.cell.unwrap_or(Cell::new(0, 0));
            let s = mu.shadow_size(c).unwrap_or(0);
            let d = binomial(s, k) as f64 * mu.multinomial() as f64;
            d * d
        }
        _ => {
            let mu: Partition = case.subject.parse().expect("partition subject");
            let c = case.cell.unwrap_or(Cell::new(0, 0));
            let s = mu.shadow_size(c).unwrap_or(0);
            let d = binomial(s, k) as f64 * factorial(mu.size() - k.min(mu.size())) as f64;
            match check {
                Check::Orbit => d * d * d,
                Check::IdealEq => d * d * cfg.trials as f64,
                _ => d * d,
            }
        }
    }
}

fn subject_cells(s: &str) -> usize {
    s.parse::<LatticeDiagram>().map(|d| d.len()).unwrap_or(0)
}

/// Stable 64-bit FNV-1a, used to derive a per-case RNG seed from the case id.
fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, b: Bidegree) -> Polynomial {
    let monos = monomials_of_bidegree(n, b);
    let take = rng.gen_range(1..=monos.len().min(6));
    let terms: Vec<_> = monos
        .choose_multiple(rng, take)
        .map(|m| (m.clone(), rat(rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 })))
        .collect();
    Polynomial::from_terms(n, terms).expect("fixed arity")
}

fn holed(mu: &Partition, holes: &[(usize, usize)]) -> latdiag::Result<Polynomial> {
    delta(&mu.remove_cells(holes.iter().map(|&(p, q)| Cell::new(p, q)))?.diagram())
}

fn values(pairs: impl IntoIterator<Item = (&'static str, Value)>) -> BTreeMap<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Runs one check on one case. Errors from the library become failures with the message recorded.
pub fn run_case(check: Check, case: &Case, cfg: &SuiteConfig) -> VerificationRecord {
    let id = case.id(check);
    let start = Instant::now();
    let (status, vals) = match evaluate(check, case, cfg, &id) {
        Ok(r) => r,
        Err(e) => (Status::Fail, values([("error", json!(e.to_string()))])),
    };
    VerificationRecord {
        id,
        check,
        case: case.clone(),
        status,
        values: vals,
        wall_ms: Some(start.elapsed().as_millis() as u64),
    }
}

fn evaluate(check: Check, case: &Case, cfg: &SuiteConfig, id: &str) -> Result<(Status, BTreeMap<String, Value>)> {
    if check == Check::Shift {
        let d: LatticeDiagram = case.subject.parse()?;
        let k = case.k.context("shift case without k")?;
        let mut ok = true;
        let mut nonneg = true;
        for op in [ShiftOp::PowerSum, ShiftOp::Elementary, ShiftOp::Complete] {
            let sum = shift_apply(op, k, &d, Alphabet::X)?;
            ok &= sum.to_polynomial(d.len())? == direct_apply(op, k, &d, Alphabet::X)?;
            if op != ShiftOp::PowerSum {
                nonneg &= sum.terms.iter().all(|(c, _)| *c >= rat(0));
            }
        }
        return Ok((Status::from_bool(ok && nonneg), values([("expansions_agree", json!(ok)), ("nonnegative", json!(nonneg))])));
    }
    let mu: Partition = case.subject.parse()?;
    let c = case.cell.unwrap_or(Cell::new(0, 0));
    let k = case.k.unwrap_or(0);
    Ok(match check {
        Check::Nfact => {
            let dim = derivative_closure(&delta(&mu.cells())?)?.dimension();
            let want = factorial(mu.size());
            (Status::from_bool(dim as u128 == want), values([("dimension", json!(dim)), ("n_factorial", json!(want))]))
        }
        Check::Bound | Check::Conjecture => {
            let dim = build_mkij(&mu, c, k, false)?.dimension() as u128;
            let bound = mkij_bound(&mu, c, k)?;
            let status = match check {
                Check::Bound => Status::from_bool(dim <= bound),
                _ if dim == bound => Status::Pass,
                _ => Status::Finding,
            };
            (status, values([("dimension", json!(dim)), ("bound", json!(bound))]))
        }
        Check::OneHole => {
            let m1 = build_mkij(&mu, c, 1, false)?;
            let single = derivative_closure(&holed(&mu, &[(c.p, c.q)])?)?;
            let equal = m1.is_subspace_of(&single)? && single.is_subspace_of(&m1)?;
            let s = mu.shadow_size(c)?;
            let want = s as u128 * factorial(mu.size() - 1);
            let dim = m1.dimension();
            (
                Status::from_bool(equal && dim as u128 == want),
                values([("dimension", json!(dim)), ("expected", json!(want)), ("equals_single_closure", json!(equal))]),
            )
        }
        Check::IdealEq => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ fnv1a(id));
            let n = mu.size() - k;
            let space = build_mkij(&mu, c, k, false)?;
            let targets = IntersectionTargets::new(&mu, c, k)?;
            let (mut members, mut disagreements) = (0usize, 0usize);
            for t in 0..cfg.trials {
                let b = Bidegree::new(rng.gen_range(0..=3), rng.gen_range(0..=3));
                let mut p = Polynomial::zero(n);
                if t % 2 == 0 {
                    for a in annihilator_basis(&space, b) {
                        p = p.add(&a.scale(&rat(rng.gen_range(-3..=3))))?;
                    }
                }
                if p.is_zero() {
                    p = random_poly(&mut rng, n, b);
                }
                let direct = ideal_member_direct(&p, &mu, c, k)?;
                if direct != targets.is_member(&p)? {
                    disagreements += 1;
                }
                members += direct as usize;
            }
            let one = Polynomial::one(n);
            let high = latdiag::symmetric::power_sum(n, mu.size() + 1, Alphabet::X);
            let witnesses = !ideal_member_direct(&one, &mu, c, k)?
                && !targets.is_member(&one)?
                && ideal_member_direct(&high, &mu, c, k)?
                && targets.is_member(&high)?;
            (
                Status::from_bool(disagreements == 0 && witnesses),
                values([
                    ("trials", json!(cfg.trials)),
                    ("members", json!(members)),
                    ("disagreements", json!(disagreements)),
                    ("witnesses", json!(witnesses)),
                ]),
            )
        }
        Check::TwoHoleCounterexample => {
            let a = derivative_closure(&holed(&mu, &[(0, 0), (1, 0), (0, 1)])?)?;
            let b = derivative_closure(&holed(&mu, &[(0, 0), (0, 1), (0, 2)])?)?;
            let excluded = !sum_spaces(&[a, b])?.contains(&holed(&mu, &[(0, 0), (1, 0), (0, 2)])?)?;
            let m2 = build_mkij(&mu, c, 2, false)?;
            let g = sum_spaces(&[
                derivative_closure(&holed(&mu, &[(0, 0), (0, 1)])?)?,
                derivative_closure(&holed(&mu, &[(0, 0), (1, 0)])?)?,
            ])?;
            let equal = m2.is_subspace_of(&g)? && g.is_subspace_of(&m2)?;
            (
                Status::from_bool(excluded && equal),
                values([("excluded", json!(excluded)), ("two_generator_sum_equal", json!(equal)), ("dimension", json!(m2.dimension()))]),
            )
        }
        Check::Xpart => {
            let family = build_b(&mu, c, k)?;
            let v = verify_b(&family, &mu, c, k)?;
            let t = count_t(&mu, c, k)?;
            (
                Status::from_bool(v.holds() && v.x_dimension as u128 == t),
                values([
                    ("basis_size", json!(v.size)),
                    ("rank", json!(v.rank)),
                    ("tableaux", json!(t)),
                    ("x_dimension", json!(v.x_dimension)),
                    ("contained", json!(v.contained)),
                ]),
            )
        }
        Check::DepthLemma => {
            let ok = depth_tuples_distinct(&mu, c, k)?;
            (Status::from_bool(ok), values([("distinct", json!(ok))]))
        }
        Check::Orbit => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ fnv1a(id));
            let n = mu.size() - k;
            let (alpha, beta) = default_parameters(&mu);
            let pts = orbit_points(&mu, c, k, &alpha, &beta)?;
            let want = binomial(mu.shadow_size(c)?, k) * factorial(n);
            let anns = interpolate_annihilators(n, &pts, interpolation_degree(n, pts.len()))?;
            let nontrivial = anns.len();
            let anns = if anns.is_empty() { vec![Polynomial::zero(n)] } else { anns };
            let mut transfer = true;
            for _ in 0..cfg.orbit_trials {
                let mut p = Polynomial::zero(n);
                for a in anns.choose_multiple(&mut rng, anns.len().min(3)) {
                    p = p.add(&a.scale(&rat(rng.gen_range(1..=4))))?;
                }
                transfer &= orbit_vanishing_transfer(&p, &mu, c, k, &alpha, &beta)?;
            }
            (
                Status::from_bool(pts.len() as u128 == want && transfer),
                values([
                    ("points", json!(pts.len())),
                    ("expected_points", json!(want)),
                    ("annihilators", json!(nontrivial)),
                    ("transfer", json!(transfer)),
                ]),
            )
        }
        Check::Shift => unreachable!("handled above"),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub findings: usize,
    /// Records computed by this invocation (the rest came from the progress log).
    pub computed: usize,
}

impl SuiteSummary {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Reads a progress log, ignoring a torn final line.
pub fn read_progress(path: &Path) -> Result<BTreeMap<String, VerificationRecord>> {
    let mut out = BTreeMap::new();
    if !path.exists() {
        return Ok(out);
    }
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    for line in BufReader::new(f).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        if let Ok(r) = serde_json::from_str::<VerificationRecord>(&line) {
            out.insert(r.id.clone(), r);
        }
    }
    Ok(out)
}

/// The progress log that goes with a report path.
pub fn progress_path(report: &Path) -> PathBuf {
    let mut s = report.as_os_str().to_owned();
    s.push(".progress.jsonl");
    PathBuf::from(s)
}

/// Enumerates, checks the cost ceiling, runs what is missing from the log, then writes the report.
pub fn run_suite(cfg: &SuiteConfig, report: &Path) -> Result<(SuiteSummary, Vec<VerificationRecord>)> {
    let mut planned: Vec<(Check, Case)> = Vec::new();
    let checks: BTreeSet<Check> = cfg.checks.iter().copied().collect();
    for &check in &checks {
        for case in enumerate_cases(check, cfg.budget(check)) {
            planned.push((check, case));
        }
    }
    let cost: f64 = planned.iter().map(|(ch, c)| estimate_cost(*ch, c, cfg)).sum();
    if cost > cfg.cost_ceiling {
        bail!(
            "estimated cost {cost:.3e} exceeds the ceiling {:.3e}; lower --max-size or raise --cost-ceiling",
            cfg.cost_ceiling
        );
    }

    if let Some(dir) = report.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let log_path = progress_path(report);
    let done = read_progress(&log_path)?;
    let todo: Vec<&(Check, Case)> = planned.iter().filter(|(ch, c)| !done.contains_key(&c.id(*ch))).collect();

    let torn = fs::read(&log_path).map(|b| b.last().is_some_and(|&c| c != b'\n')).unwrap_or(false);
    let mut log = OpenOptions::new().create(true).append(true).open(&log_path)?;
    if torn {
        writeln!(log)?;
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs.max(1)).build()?;
    let (tx, rx) = mpsc::channel::<VerificationRecord>();
    let mut fresh = Vec::new();
    let mut write_err = None;
    std::thread::scope(|s| {
        s.spawn(|| {
            pool.install(|| {
                todo.par_iter().for_each_with(tx, |tx, (ch, c)| {
                    let _ = tx.send(run_case(*ch, c, cfg));
                })
            })
        });
        for rec in rx {
            let line = serde_json::to_string(&rec).expect("record serializes");
            if let Err(e) = writeln!(log, "{line}").and_then(|_| log.flush()) {
                write_err.get_or_insert(e);
            }
            fresh.push(rec);
        }
    });
    if let Some(e) = write_err {
        return Err(e).context("writing progress log");
    }

    let computed = fresh.len();
    let mut all: BTreeMap<String, VerificationRecord> = done;
    for r in fresh {
        all.insert(r.id.clone(), r);
    }
    let wanted: BTreeSet<String> = planned.iter().map(|(ch, c)| c.id(*ch)).collect();
    let records: Vec<VerificationRecord> = all
        .into_values()
        .filter(|r| wanted.contains(&r.id))
        .map(|mut r| {
            r.wall_ms = None;
            r
        })
        .collect();
    write_report(report, &records)?;
    let count = |s: Status| records.iter().filter(|r| r.status == s).count();
    let summary = SuiteSummary {
        total: records.len(),
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        findings: count(Status::Finding),
        computed,
    };
    Ok((summary, records))
}

#[derive(Serialize)]
struct CsvRow<'a> {
    id: &'a str,
    check: &'a str,
    subject: &'a str,
    cell: String,
    k: String,
    status: Status,
    values: String,
}

/// JSON array, or CSV when the path ends in `.csv`.
pub fn write_report(path: &Path, records: &[VerificationRecord]) -> Result<()> {
    if path.extension().is_some_and(|e| e == "csv") {
        let mut w = csv::Writer::from_path(path)?;
        for r in records {
            w.serialize(CsvRow {
                id: &r.id,
                check: r.check.name(),
                subject: &r.case.subject,
                cell: r.case.cell.map(|c| c.to_string()).unwrap_or_default(),
                k: r.case.k.map(|k| k.to_string()).unwrap_or_default(),
                status: r.status,
                values: serde_json::to_string(&r.values)?,
            })?;
        }
        w.flush()?;
    } else {
        let mut body = serde_json::to_string_pretty(records)?;
        body.push('\n');
        fs::write(path, body)?;
    }
    Ok(())
}

/// Plain-text table for humans.
pub fn render_table(records: &[VerificationRecord]) -> String {
    let width = records.iter().map(|r| r.id.len()).max().unwrap_or(2).max(2);
    let mut out = format!("{:<width$}  status   values\n", "id");
    for r in records {
        let status = match r.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Finding => "finding",
        };
        let vals: Vec<String> = r.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
        out += &format!("{:<width$}  {:<7}  {}\n", r.id, status, vals.join(" "));
    }
    out
}
