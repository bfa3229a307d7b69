//! Seeded random sampling and the verification suite behind `medial verify`.
//!
//! Sample `i` draws from a `ChaCha8` stream seeded with `seed ^ i`, so the
//! report does not depend on thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use medial_core::bounds::{compute_bounds_with_probe, DEFAULT_PROBE_DEPTH};
use medial_core::mesh::subdivide_to_with_limit;
use medial_core::subdivision::{nested_triangles, ChildIndex, StepMetrics};
use medial_core::{
    inequality_ledger, jester_hat_check, BoundConstants, Error, Geometry, LabeledTriangle, LedgerEntry,
    NestedPath, RelationKind, Result,
};

/// Version of the JSON report layout.
pub const SCHEMA: u32 = 1;
/// Draws allowed per sample before the side range is declared infeasible.
pub const MAX_ATTEMPTS: usize = 10_000;
/// Largest prefix depth accepted by the exhaustive policy.
pub const MAX_EXHAUSTIVE_DEPTH: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PathPolicy {
    AllCentral,
    Random { paths: usize },
    /// Every word of length `depth`, each continued by random children.
    ExhaustiveToDepth { depth: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleSpec {
    pub geometry: Geometry,
    pub count: usize,
    pub side_range: (f64, f64),
    pub seed: u64,
    pub path_policy: PathPolicy,
    #[serde(default = "default_probe")]
    pub probe_depth: usize,
    /// Depth of the full-level angle gap check; none when absent.
    #[serde(default)]
    pub full_level_depth: Option<usize>,
}

fn default_probe() -> usize {
    DEFAULT_PROBE_DEPTH
}

impl SampleSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: SampleSpec = toml::from_str(text).map_err(|e| Error::ConfigError(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.side_range;
        if self.count == 0 {
            return Err(Error::ConfigError("count must be at least 1".into()));
        }
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(Error::ConfigError(format!("side range ({lo}, {hi}) must satisfy 0 < min ≤ max")));
        }
        if self.geometry == Geometry::Spherical && hi >= PI {
            return Err(Error::ConfigError(format!("spherical sides must stay below π, got {hi}")));
        }
        match self.path_policy {
            PathPolicy::Random { paths: 0 } => Err(Error::ConfigError("random policy needs paths ≥ 1".into())),
            PathPolicy::ExhaustiveToDepth { depth } if depth > MAX_EXHAUSTIVE_DEPTH => Err(Error::ConfigError(
                format!("exhaustive depth {depth} exceeds {MAX_EXHAUSTIVE_DEPTH}"),
            )),
            _ => Ok(()),
        }
    }
}

/// How a bound check treats its margin.
#[derive(Clone, Copy, Debug)]
enum Slack {
    /// Margin must be positive.
    Strict,
    /// Margin may dip to `-tol`.
    Within(f64),
    /// `|lhs − rhs| ≤ tol`.
    Equal(f64),
}

fn bound_entry(name: &str, step: usize, vertex: usize, lhs: f64, rhs: f64, kind: RelationKind, slack: Slack) -> LedgerEntry {
    let mut e = LedgerEntry::evaluate(name, step, vertex, lhs, rhs, kind);
    e.satisfied = match slack {
        Slack::Strict => e.residual > 0.0,
        Slack::Within(tol) => e.residual >= -tol,
        Slack::Equal(tol) => (lhs - rhs).abs() <= tol,
    };
    e
}

/// Tolerances of the length, height and angle sandwiches.
fn slacks(g: Geometry) -> [(Slack, Slack); 3] {
    match g {
        Geometry::Hyperbolic => [
            (Slack::Within(1e-9), Slack::Within(1e-12)),
            (Slack::Within(1e-9), Slack::Within(1e-9)),
            (Slack::Strict, Slack::Strict),
        ],
        Geometry::Spherical => [
            (Slack::Within(1e-12), Slack::Within(1e-12)),
            (Slack::Within(1e-9), Slack::Within(1e-9)),
            (Slack::Strict, Slack::Strict),
        ],
        Geometry::Euclidean => [(Slack::Equal(1e-10), Slack::Equal(1e-10)); 3],
    }
}

fn kinds(s: Slack) -> (RelationKind, RelationKind) {
    match s {
        Slack::Equal(_) => (RelationKind::Equality, RelationKind::Equality),
        _ => (RelationKind::StrictGreater, RelationKind::StrictLess),
    }
}

/// Length, height and angle sandwich entries for one step.
fn sandwich_entries(m: &StepMetrics, t0: &StepMetrics, b: &BoundConstants, out: &mut Vec<LedgerEntry>) {
    let [(ll, lu), (hl, hu), (al, au)] = slacks(b.geometry);
    for i in 0..3 {
        let rows = [
            ("length", m.normalized_sides[i], t0.sides[i], b.lengths[i], ll, lu),
            ("height", m.normalized_heights[i], t0.heights[i], b.heights[i], hl, hu),
            ("angle", m.angles[i], t0.angles[i], b.angles[i], al, au),
        ];
        for (what, x, x0, s, lo, hi) in rows {
            let (kl, _) = kinds(lo);
            let (_, ku) = kinds(hi);
            out.push(bound_entry(&format!("{what}_sandwich_lower"), m.n, i, x, x0 * s.lower, kl, lo));
            out.push(bound_entry(&format!("{what}_sandwich_upper"), m.n, i, x, x0 * s.upper, ku, hi));
        }
    }
}

/// Every angle of `T_k` lies in `(δ, π − δ)`.
fn full_level_entries(t0: &LabeledTriangle, k: usize, delta: f64, out: &mut Vec<LedgerEntry>) -> Result<()> {
    let level = subdivide_to_with_limit(t0, k, k)?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for t in level.triangles() {
        for a in t.angles()? {
            lo = lo.min(a);
            hi = hi.max(a);
        }
    }
    let slack = if t0.geometry() == Geometry::Euclidean { Slack::Within(1e-10) } else { Slack::Strict };
    out.push(bound_entry("angle_gap_lower", k, 0, lo, delta, RelationKind::StrictGreater, slack));
    out.push(bound_entry("angle_gap_upper", k, 0, hi, PI - delta, RelationKind::StrictLess, slack));
    Ok(())
}

/// One row of the per-step CSV table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepRow {
    pub sample: usize,
    pub path: usize,
    pub step: usize,
    pub child: String,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub scaled_a: f64,
    pub scaled_h_a: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RelationSummary {
    pub evaluated: usize,
    pub failed: usize,
    pub skipped: usize,
    /// Smallest signed margin; equalities count as `−|lhs − rhs|`.
    pub worst_margin: f64,
}

fn margin(e: &LedgerEntry) -> f64 {
    match e.kind {
        RelationKind::Equality => -e.residual.abs(),
        _ => e.residual,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub index: usize,
    pub sides: [f64; 3],
    pub rotation: f64,
    pub attempts: usize,
    pub paths: usize,
    pub evaluated: usize,
    pub failed: usize,
    pub worst_relation: Option<String>,
    pub worst_margin: f64,
    pub constants: Option<BoundConstants>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub spec: SampleSpec,
    pub depth: usize,
    pub samples: usize,
    pub draws: usize,
    pub rejection_rate: f64,
    pub evaluated: usize,
    pub failed: usize,
    pub errors: usize,
    pub relations: BTreeMap<String, RelationSummary>,
    pub details: Vec<SampleReport>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failed == 0 && self.errors == 0
    }

    /// Exit status for CI: 0 when everything passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Draws a valid triangle for sample `index`, returning it with the rng
/// positioned for path sampling.
pub fn sample_triangle(spec: &SampleSpec, index: usize) -> Result<(LabeledTriangle, [f64; 3], f64, usize, ChaCha8Rng)> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ index as u64);
    let (lo, hi) = spec.side_range;
    for attempt in 1..=MAX_ATTEMPTS {
        let sides: [f64; 3] = std::array::from_fn(|_| if lo < hi { rng.gen_range(lo..hi) } else { lo });
        let rotation = rng.gen_range(0.0..TAU);
        if let Ok(t) = LabeledTriangle::from_sides(sides[0], sides[1], sides[2], spec.geometry, rotation) {
            return Ok((t, sides, rotation, attempt, rng));
        }
    }
    Err(Error::ConfigError(format!("no valid triangle in {MAX_ATTEMPTS} draws from the side range")))
}

fn random_child(rng: &mut ChaCha8Rng) -> ChildIndex {
    ChildIndex::ALL[rng.gen_range(0..4)]
}

/// The paths examined for one sample.
pub fn sample_paths(policy: &PathPolicy, depth: usize, rng: &mut ChaCha8Rng) -> Vec<NestedPath> {
    match *policy {
        PathPolicy::AllCentral => vec![NestedPath::all_central(depth)],
        PathPolicy::Random { paths } => {
            (0..paths).map(|_| NestedPath::new((0..depth).map(|_| random_child(rng)).collect())).collect()
        }
        PathPolicy::ExhaustiveToDepth { depth: k } => {
            let k = k.min(depth);
            (0..1usize << (2 * k))
                .map(|code| {
                    let mut steps: Vec<ChildIndex> =
                        (0..k).rev().map(|j| ChildIndex::ALL[(code >> (2 * j)) & 3]).collect();
                    steps.extend((k..depth).map(|_| random_child(rng)));
                    NestedPath::new(steps)
                })
                .collect()
        }
    }
}

struct SampleRun {
    report: SampleReport,
    entries: Vec<LedgerEntry>,
    rows: Vec<StepRow>,
}

fn check_sample(
    t0: &LabeledTriangle,
    spec: &SampleSpec,
    paths: &[NestedPath],
    index: usize,
    keep_rows: bool,
) -> Result<(BoundConstants, Vec<LedgerEntry>, Vec<StepRow>)> {
    let b = compute_bounds_with_probe(t0, spec.probe_depth)?;
    let mut entries = jester_hat_check(t0)?;
    let mut rows = Vec::new();
    if let Some(k) = spec.full_level_depth {
        full_level_entries(t0, k, b.delta, &mut entries)?;
    }
    for (p, path) in paths.iter().enumerate() {
        let tris = nested_triangles(t0, path)?;
        let m0 = StepMetrics::of(t0, 0, None)?;
        for (n, t) in tris.iter().enumerate().skip(1) {
            let m = StepMetrics::of(t, n, Some(path.steps[n - 1]))?;
            sandwich_entries(&m, &m0, &b, &mut entries);
            if keep_rows {
                rows.push(step_row(index, p, &m));
            }
        }
        if keep_rows {
            rows.insert(rows.len() - path.depth(), step_row(index, p, &m0));
        }
        entries.extend(inequality_ledger(t0, path)?);
    }
    Ok((b, entries, rows))
}

fn step_row(sample: usize, path: usize, m: &StepMetrics) -> StepRow {
    StepRow {
        sample,
        path,
        step: m.n,
        child: m.child.map(|c| format!("{c:?}")).unwrap_or_default(),
        a: m.sides[0],
        b: m.sides[1],
        c: m.sides[2],
        scaled_a: m.normalized_sides[0],
        scaled_h_a: m.normalized_heights[0],
        alpha: m.angles[0],
        beta: m.angles[1],
        gamma: m.angles[2],
    }
}

fn run_sample(spec: &SampleSpec, depth: usize, index: usize, keep_rows: bool) -> Result<SampleRun> {
    let (t0, sides, rotation, attempts, mut rng) = sample_triangle(spec, index)?;
    let paths = sample_paths(&spec.path_policy, depth, &mut rng);
    let mut report = SampleReport {
        index,
        sides,
        rotation,
        attempts,
        paths: paths.len(),
        evaluated: 0,
        failed: 0,
        worst_relation: None,
        worst_margin: f64::INFINITY,
        constants: None,
        error: None,
    };
    let (entries, rows) = match check_sample(&t0, spec, &paths, index, keep_rows) {
        Ok((b, entries, rows)) => {
            report.constants = Some(b);
            (entries, rows)
        }
        Err(e) => {
            report.error = Some(e.to_string());
            (Vec::new(), Vec::new())
        }
    };
    for e in entries.iter().filter(|e| !e.skipped) {
        report.evaluated += 1;
        report.failed += e.failed() as usize;
        let m = margin(e);
        if m < report.worst_margin {
            report.worst_margin = m;
            report.worst_relation = Some(e.name.clone());
        }
    }
    Ok(SampleRun { report, entries, rows })
}

/// Output of a suite run, with the optional per-step table.
pub struct SuiteOutput {
    pub report: VerificationReport,
    pub rows: Vec<StepRow>,
}

pub fn run_suite(spec: &SampleSpec, depth: usize) -> Result<VerificationReport> {
    run_suite_detailed(spec, depth, false).map(|o| o.report)
}

pub fn run_suite_detailed(spec: &SampleSpec, depth: usize, keep_rows: bool) -> Result<SuiteOutput> {
    spec.validate()?;
    let runs = (0..spec.count)
        .into_par_iter()
        .map(|i| run_sample(spec, depth, i, keep_rows))
        .collect::<Result<Vec<_>>>()?;

    let mut relations: BTreeMap<String, RelationSummary> = BTreeMap::new();
    for e in runs.iter().flat_map(|r| &r.entries) {
        let s = relations
            .entry(e.name.clone())
            .or_insert(RelationSummary { worst_margin: f64::INFINITY, ..Default::default() });
        if e.skipped {
            s.skipped += 1;
            continue;
        }
        s.evaluated += 1;
        s.failed += e.failed() as usize;
        s.worst_margin = s.worst_margin.min(margin(e));
    }
    let draws: usize = runs.iter().map(|r| r.report.attempts).sum();
    let mut rows = Vec::new();
    let mut details = Vec::with_capacity(runs.len());
    for r in runs {
        rows.extend(r.rows);
        details.push(r.report);
    }
    let report = VerificationReport {
        schema: SCHEMA,
        spec: spec.clone(),
        depth,
        samples: spec.count,
        draws,
        rejection_rate: 1.0 - spec.count as f64 / draws as f64,
        evaluated: details.iter().map(|d| d.evaluated).sum(),
        failed: details.iter().map(|d| d.failed).sum(),
        errors: details.iter().filter(|d| d.error.is_some()).count(),
        relations,
        details,
    };
    Ok(SuiteOutput { report, rows })
}

/// The per-step table as CSV.
pub fn rows_to_csv(rows: &[StepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::ConfigError(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::ConfigError(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(g: Geometry, count: usize) -> SampleSpec {
        SampleSpec {
            geometry: g,
            count,
            side_range: (0.1, 1.0),
            seed: 7,
            path_policy: PathPolicy::Random { paths: 2 },
            probe_depth: DEFAULT_PROBE_DEPTH,
            full_level_depth: None,
        }
    }

    #[test]
    fn toml_round_trip() {
        let text = r#"
            geometry = "h2"
            count = 3
            side_range = [0.1, 3.0]
            seed = 42
            path_policy = { kind = "random", paths = 5 }
        "#;
        let s = SampleSpec::from_toml(text).unwrap();
        assert_eq!(s.path_policy, PathPolicy::Random { paths: 5 });
        assert_eq!(s.probe_depth, DEFAULT_PROBE_DEPTH);
        let bad = text.replace("count = 3", "count = 0");
        assert!(matches!(SampleSpec::from_toml(&bad), Err(Error::ConfigError(_))));
        assert!(matches!(SampleSpec::from_toml("geometry = 1"), Err(Error::ConfigError(_))));
    }

    #[test]
    fn infeasible_spherical_range() {
        let mut s = spec(Geometry::Spherical, 1);
        s.side_range = (1.0, 3.5);
        assert!(matches!(run_suite(&s, 2), Err(Error::ConfigError(_))));
        // Equal sides of 2.2 break the hemisphere condition on every draw.
        s.side_range = (2.2, 2.2);
        assert!(matches!(run_suite(&s, 2), Err(Error::ConfigError(_))));
    }

    #[test]
    fn exhaustive_paths_cover_prefixes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let paths = sample_paths(&PathPolicy::ExhaustiveToDepth { depth: 2 }, 4, &mut rng);
        assert_eq!(paths.len(), 16);
        let prefixes: std::collections::BTreeSet<_> = paths.iter().map(|p| p.steps[..2].to_vec()).collect();
        assert_eq!(prefixes.len(), 16);
        assert!(paths.iter().all(|p| p.depth() == 4));
    }

    #[test]
    fn euclidean_suite_is_exact() {
        let mut s = spec(Geometry::Euclidean, 4);
        s.full_level_depth = Some(3);
        let r = run_suite(&s, 6).unwrap();
        assert!(r.passed(), "{:?}", r.relations);
        assert!(r.relations["length_sandwich_upper"].worst_margin > -1e-12);
    }

    #[test]
    fn samples_are_independent_of_count() {
        let a = run_suite(&spec(Geometry::Hyperbolic, 2), 3).unwrap();
        let b = run_suite(&spec(Geometry::Hyperbolic, 3), 3).unwrap();
        assert_eq!(a.details[1], b.details[1]);
    }
}
