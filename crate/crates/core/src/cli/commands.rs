//! Dispatch from a validated configuration to the library operations.

use std::error::Error;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    kernel_word_image, pair_group, single_group, steinberg_generators, verify_steinberg_relations, Pair, Ring,
};
use crate::geometry::{cat0_defect, dist, flatness_profile, unit_probe, Model};
use crate::repangle::{heisenberg_irreps, steinberg_pair_angle, AngleReport};
use crate::solver::{
    barycenter_inequality_check, fh_affine_minimize, minimize_f, monitor_sweep, scenario_generator,
    vertex_angle_certificate, ScenarioKind, ScenarioParams, TriangleState,
};

use super::config::{Command, ModelKind, RunConfig, Suite};
use super::report::{Report, ReportRecord};

type CmdResult = Result<Outcome, Box<dyn Error>>;

struct Outcome {
    records: Vec<ReportRecord>,
    violations: u64,
}

impl Outcome {
    fn new() -> Self {
        Self {
            records: Vec::new(),
            violations: 0,
        }
    }

    fn push(&mut self, r: ReportRecord) {
        self.records.push(r);
    }

    fn extend(&mut self, other: Outcome) {
        self.records.extend(other.records);
        self.violations += other.violations;
    }
}

/// Run `command` and collect its records. Exit code 0 on success, 1 when a
/// computation fails or a checked inequality is violated.
pub fn run_command(command: Command, cfg: &RunConfig) -> Report {
    if let Err(e) = cfg.require(command) {
        return config_error(&e.to_string());
    }
    let result = match command {
        Command::Angle => angle(cfg),
        Command::Heisenberg => heisenberg(cfg),
        Command::Enumerate => enumerate(cfg),
        Command::Relations => relations(cfg),
        Command::Solve => solve(cfg),
        Command::FhCheck => fh_check(cfg),
        Command::Flatness => flatness(cfg),
        Command::Verify => verify(cfg),
    };
    match result {
        Ok(out) if out.violations == 0 => Report {
            records: out.records,
            status: "ok".into(),
            exit_code: 0,
        },
        Ok(mut out) => {
            out.push(ReportRecord::new("violations").with("count", out.violations));
            Report {
                records: out.records,
                status: "violations".into(),
                exit_code: 1,
            }
        }
        Err(e) => Report {
            records: vec![ReportRecord::new("error").with("message", e.to_string())],
            status: "error".into(),
            exit_code: 1,
        },
    }
}

pub fn config_error(message: &str) -> Report {
    Report {
        records: vec![ReportRecord::new("error").with("message", message)],
        status: "config-error".into(),
        exit_code: 2,
    }
}

struct AlgebraArgs {
    p: u32,
    n: usize,
    k: usize,
    d: usize,
}

fn algebra_args(cfg: &RunConfig) -> AlgebraArgs {
    let n = cfg.n.expect("checked by require");
    AlgebraArgs {
        p: cfg.p.expect("checked by require"),
        n,
        k: cfg.k.expect("checked by require"),
        d: cfg.max_degree.unwrap_or(n),
    }
}

fn angle_fields(r: ReportRecord, a: &AngleReport) -> ReportRecord {
    r.with("cosine", a.cosine)
        .with("angle", a.angle)
        .with("margin", a.margin)
        .with("dim_v1", a.dim_v1)
        .with("dim_v2", a.dim_v2)
        .with("dim_intersection", a.dim_intersection)
        .with("degenerate", a.degenerate)
        .with("method", a.method.as_str())
}

fn with_ring(r: ReportRecord, a: &AlgebraArgs) -> ReportRecord {
    r.with("p", a.p).with("n", a.n).with("k", a.k).with("D", a.d)
}

fn angle(cfg: &RunConfig) -> CmdResult {
    let a = algebra_args(cfg);
    let pairs = cfg.pair.map_or(Pair::ALL.to_vec(), |p| vec![p]);
    let mut out = Outcome::new();
    for pair in pairs {
        let pa = steinberg_pair_angle(a.n, a.k, a.p, a.d, pair, cfg.cap)?;
        let r = ReportRecord::new("angle")
            .with("pair", pair.to_string())
            .with("order", pa.order)
            .with("order_first", pa.order_first)
            .with("order_second", pa.order_second);
        out.push(angle_fields(with_ring(r, &a), &pa.report));
    }
    Ok(out)
}

fn heisenberg(cfg: &RunConfig) -> CmdResult {
    let p = cfg.p.expect("checked by require");
    let fam = heisenberg_irreps(p)?;
    let angles = fam.irrep_angles()?;
    let mut out = Outcome::new();
    let mut ones = 0usize;
    for (i, (rep, a)) in fam.irreps.iter().zip(&angles).enumerate() {
        if rep.dim() == 1 {
            ones += 1;
        }
        let r = ReportRecord::new("irrep")
            .with("index", i)
            .with("dim", rep.dim())
            .with("label", rep.label());
        out.push(angle_fields(r, a));
    }
    let mut summary = ReportRecord::new("heisenberg")
        .with("p", p)
        .with("order", fam.group.order())
        .with("irreps", fam.irreps.len())
        .with("one_dimensional", ones)
        .with("higher_dimensional", fam.irreps.len() - ones);
    if let Some(min) = fam.min_nontrivial_angle()? {
        summary = summary
            .with("min_angle", min.angle)
            .with("min_cosine", min.cosine)
            .with("min_margin", min.margin);
    }
    out.push(summary);
    Ok(out)
}

fn enumerate(cfg: &RunConfig) -> CmdResult {
    let a = algebra_args(cfg);
    let gens = steinberg_generators(a.n, a.k, a.p, a.d)?;
    let mut out = Outcome::new();
    let pairs: Vec<Pair> = match (cfg.pair, cfg.subgroup) {
        (Some(p), _) => vec![p],
        (None, Some(_)) => vec![],
        (None, None) => Pair::ALL.to_vec(),
    };
    let singles: Vec<usize> = match (cfg.pair, cfg.subgroup) {
        (_, Some(s)) => vec![s],
        (Some(_), None) => vec![],
        (None, None) => vec![1, 2, 3],
    };
    for pair in pairs {
        let pg = pair_group(&gens, pair, cfg.cap)?;
        let r = ReportRecord::new("group")
            .with("pair", pair.to_string())
            .with("order", pg.table.order())
            .with("order_first", pg.first.len())
            .with("order_second", pg.second.len())
            .with("generators", pg.table.generators().len());
        out.push(with_ring(r, &a));
    }
    for s in singles {
        let table = single_group(&gens, s - 1, cfg.cap)?;
        let r = ReportRecord::new("group")
            .with("subgroup", s)
            .with("order", table.order())
            .with("generators", table.generators().len());
        out.push(with_ring(r, &a));
    }
    Ok(out)
}

fn relations(cfg: &RunConfig) -> CmdResult {
    let a = algebra_args(cfg);
    let pool = Ring::new(a.p, a.k, a.d)?.degree_one_pool();
    let report = verify_steinberg_relations(a.n, a.k, a.p, a.d, &pool)?;
    let mut out = Outcome::new();
    for (i, fam) in report.families.iter().enumerate() {
        let r = ReportRecord::new("relation")
            .with("family", i + 1)
            .with("checked", fam.checked)
            .with("violations", fam.violations);
        out.push(with_ring(r, &a));
    }
    let total = report.total_violations();
    out.push(with_ring(
        ReportRecord::new("relations")
            .with("pool", pool.len())
            .with("violations", total),
        &a,
    ));
    out.violations += total;
    let word = kernel_word_image(a.n)?;
    let identity = word.is_identity();
    out.push(ReportRecord::new("kernel-word").with("n", a.n).with("identity", identity));
    if !identity {
        out.violations += 1;
    }
    Ok(out)
}

fn model_of(cfg: &RunConfig) -> Result<Model, Box<dyn Error>> {
    Ok(match cfg.model {
        ModelKind::Euclidean => Model::euclidean(cfg.dim),
        ModelKind::Hyperboloid => Model::hyperboloid(cfg.dim, cfg.curvature)?,
    })
}

fn scenario_params(cfg: &RunConfig, model: Model) -> ScenarioParams {
    let base = ScenarioParams::default();
    ScenarioParams {
        model,
        mirror_angle_deg: cfg.mirror_angle,
        heisenberg_p: cfg.p.unwrap_or(base.heisenberg_p),
        steinberg: (
            cfg.n.unwrap_or(base.steinberg.0),
            cfg.k.unwrap_or(base.steinberg.1),
            cfg.p.unwrap_or(base.steinberg.2),
        ),
        offset: cfg.offset,
        spread: cfg.spread,
        size: base.size,
        tol: cfg.tol,
        max_iter: cfg.max_iter,
        group_cap: cfg.cap,
    }
}

fn solve_one(kind: ScenarioKind, params: &ScenarioParams, seed: u64) -> CmdResult {
    let s = scenario_generator(kind, params, seed)?;
    let mut out = Outcome::new();
    let orders = s.pair_groups();
    out.push(
        ReportRecord::new("scenario")
            .with("kind", kind.as_str())
            .with("model", s.model().to_string())
            .with("dim", s.model().dim())
            .with("k_size", s.k().len())
            .with("order_12", orders[0].len())
            .with("order_13", orders[1].len())
            .with("order_23", orders[2].len())
            .with("seed", seed),
    );
    let r = minimize_f(&s)?;
    for m in &r.monitors {
        out.push(
            ReportRecord::new("monitor")
                .with("iteration", m.iteration)
                .with("h", m.ttt.h)
                .with("diam", m.ttt.diam)
                .with("ttt_lower", m.ttt.lower_holds)
                .with("ttt_upper", m.ttt.upper_holds)
                .with("good_point", m.good_point.applied)
                .with("good_point_source", m.good_point.source)
                .with("halving", m.good_point.halving_holds)
                .with("good_point_upper", m.good_point.upper_holds),
        );
    }
    let mut rec = ReportRecord::new("solve")
        .with("status", r.status.as_str())
        .with("iterations", r.iterations())
        .with("f", r.final_state.f_value)
        .with("descent_violations", r.descent_violations)
        .with("monitor_violations", r.monitor_violations());
    if let (Some(q), Some(d)) = (&r.fixed_point, r.fixed_displacement) {
        rec.set("fixed_displacement", d);
        if let Some(how) = r.recentering {
            rec.set("recentering", how.as_str());
        }
        if let Some(v) = s.planted() {
            rec.set("planted_distance", dist(q, v)?);
        }
    }
    if let Some(c) = &r.certificate {
        rec.set("fat", c.fat);
        rec.set("angle_sum", c.angle_sum);
        rec.set("angle_excess", c.excess);
        rec.set("fat_epsilon", c.fat_epsilon);
        rec.set("min_side", c.side_range.0);
        rec.set("max_side", c.side_range.1);
    }
    out.push(rec);
    out.violations += (r.descent_violations + r.monitor_violations()) as u64;
    Ok(out)
}

fn solve(cfg: &RunConfig) -> CmdResult {
    let kind = cfg.scenario.expect("checked by require");
    let model = model_of(cfg)?;
    solve_one(kind, &scenario_params(cfg, model), cfg.seed)
}

fn fh_check(cfg: &RunConfig) -> CmdResult {
    let model = Model::euclidean(cfg.dim);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Outcome::new();
    let mut violations = 0u64;
    let mut min_slack = f64::INFINITY;
    for _ in 0..cfg.trials {
        let [x, y, z] = [0; 3].map(|_| model.random_point(&mut rng, 2.0));
        let rec = barycenter_inequality_check(&x, &y, &z, 1e-12)?;
        min_slack = min_slack.min(rec.min_slack);
        if !rec.holds {
            violations += 1;
        }
    }
    out.push(
        ReportRecord::new("barycenter")
            .with("dim", cfg.dim)
            .with("trials", cfg.trials)
            .with("min_slack", min_slack)
            .with("violations", violations),
    );
    out.violations += violations;
    if cfg.dim >= 2 {
        let params = ScenarioParams {
            model,
            ..ScenarioParams::default()
        };
        let s = scenario_generator(ScenarioKind::Stress, &params, cfg.seed)?;
        let fh = fh_affine_minimize(s.groups())?;
        out.push(
            ReportRecord::new("fh-affine")
                .with("scenario", "stress")
                .with("dim", cfg.dim)
                .with("f", fh.f_value)
                .with("d_12", dist(&fh.q, &fh.projections[0])?)
                .with("d_13", dist(&fh.q, &fh.projections[1])?)
                .with("d_23", dist(&fh.q, &fh.projections[2])?),
        );
    }
    Ok(out)
}

fn flatness(cfg: &RunConfig) -> CmdResult {
    let model = Model::hyperboloid(cfg.dim, cfg.curvature)?;
    let probe = unit_probe(model)?;
    let (defects, ratios) = flatness_profile(&cfg.scales, &probe)?;
    let mut out = Outcome::new();
    for (s, d) in cfg.scales.iter().zip(&defects) {
        out.push(ReportRecord::new("flatness").with("scale", *s).with("defect", *d));
    }
    for (i, r) in ratios.iter().enumerate() {
        out.push(
            ReportRecord::new("flatness-ratio")
                .with("from", cfg.scales[i])
                .with("to", cfg.scales[i + 1])
                .with("ratio", *r),
        );
    }
    Ok(out)
}

fn geometry_suite(cfg: &RunConfig) -> CmdResult {
    let dim = cfg.dim.max(2);
    let mut out = Outcome::new();
    for (i, model) in [Model::euclidean(dim), Model::hyperboloid(dim, cfg.curvature)?].into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(i as u64));
        let mut min_defect = f64::INFINITY;
        let mut max_abs = 0.0f64;
        let mut defect_violations = 0u64;
        let mut max_excess = f64::NEG_INFINITY;
        let mut angle_violations = 0u64;
        for _ in 0..cfg.trials {
            let [x, y, z] = [0; 3].map(|_| model.random_point(&mut rng, 2.0));
            let d = cat0_defect(&x, &y, &z)?;
            min_defect = min_defect.min(d);
            max_abs = max_abs.max(d.abs());
            let bad = if model.is_flat() { d.abs() > 1e-12 } else { d < -1e-12 };
            if bad {
                defect_violations += 1;
            }
            let st = TriangleState::new(x, y, z, 0)?;
            if let Ok(c) = vertex_angle_certificate(&st, 1e-8) {
                max_excess = max_excess.max(c.excess);
                if c.excess > 1e-9 {
                    angle_violations += 1;
                }
            }
        }
        out.push(
            ReportRecord::new("geometry")
                .with("model", model.to_string())
                .with("trials", cfg.trials)
                .with("min_defect", min_defect)
                .with("max_abs_defect", max_abs)
                .with("defect_violations", defect_violations)
                .with("max_angle_excess", max_excess)
                .with("angle_violations", angle_violations),
        );
        out.violations += defect_violations + angle_violations;
    }
    Ok(out)
}

fn monitors_suite(cfg: &RunConfig) -> CmdResult {
    let dim = cfg.dim.max(2);
    let mut out = Outcome::new();
    let models = [Model::euclidean(dim), Model::hyperboloid(dim, cfg.curvature)?];
    for (i, model) in models.into_iter().enumerate() {
        for kind in [ScenarioKind::Mirrors, ScenarioKind::Stress] {
            let seed = cfg.seed.wrapping_add(i as u64);
            let params = scenario_params(cfg, model);
            let s = scenario_generator(kind, &params, seed)?;
            let sweep = monitor_sweep(&s, cfg.samples, 3.0, seed)?;
            let bad = sweep.iter().filter(|r| !r.holds()).count() as u64;
            out.push(
                ReportRecord::new("monitor-sweep")
                    .with("kind", kind.as_str())
                    .with("model", model.to_string())
                    .with("samples", cfg.samples)
                    .with("violations", bad),
            );
            out.violations += bad;
            out.extend(solve_one(kind, &params, seed)?);
        }
    }
    Ok(out)
}

fn verify(cfg: &RunConfig) -> CmdResult {
    let suite = cfg.suite.expect("checked by require");
    let mut out = Outcome::new();
    if matches!(suite, Suite::Relations | Suite::All) {
        out.extend(relations(cfg)?);
        let a = algebra_args(cfg);
        let gens = steinberg_generators(a.n, a.k, a.p, a.d)?;
        let pg = pair_group(&gens, Pair::OneTwo, cfg.cap)?;
        out.push(with_ring(
            ReportRecord::new("group")
                .with("pair", Pair::OneTwo.to_string())
                .with("order", pg.table.order()),
            &a,
        ));
    }
    if matches!(suite, Suite::Geometry | Suite::All) {
        out.extend(geometry_suite(cfg)?);
    }
    if matches!(suite, Suite::Monitors | Suite::All) {
        out.extend(monitors_suite(cfg)?);
    }
    out.push(
        ReportRecord::new("verify")
            .with("suite", suite.as_str())
            .with("violations", out.violations),
    );
    Ok(out)
}
