use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use lcfn::calculus::{ftc_check, ibp_check, interchange_check, square_integral};
use lcfn::number::Comparison;
use lcfn::variational::{
    critical_points, dbr_forward_check, dbr_reconstruct, lagrange_recover, lagrange_scan,
    lagrange_witness, verify_local_order, DiracParams, CENTER_THRESHOLD, LIMIT_NOTE,
};
use lcfn::{
    FuzzyFn, GeneratorA, GeneratorConfig, HarnessConfig, Interval, Lcfn, QuadratureSpec, Scenario,
};
use serde::Serialize;
use serde_json::json;

use crate::args::{Check, Command, FnArgs, GenArg, QuadratureArgs};
use crate::error::CliError;
use crate::report::{csv, num, verdict, Report};

const CRITICAL_POINTS_DOMAIN: [f64; 2] = [-1.0, 1.0];

pub fn quadrature_spec(args: &QuadratureArgs) -> Result<QuadratureSpec, CliError> {
    let mut spec = QuadratureSpec::default();
    if let Some(tol) = args.tol {
        spec.abs_tol = tol;
    }
    if let Some(method) = args.method {
        spec.method = method;
    }
    if let Some(depth) = args.max_depth {
        spec.max_depth = depth;
    }
    spec.validate()?;
    Ok(spec)
}

pub fn run(command: &Command, spec: &QuadratureSpec) -> Result<Report, CliError> {
    match command {
        Command::Compare { gen, left, right } => compare(gen, left, right),
        Command::Norm { gen, value } => {
            let b = literal(&load_gen(&gen.gen)?, value, "value")?;
            let norm = b.norm();
            Ok(Report::new(&json!({"value": b.view(), "norm": norm}), norm.to_string()))
        }
        Command::Classify { gen, value } => {
            let b = literal(&load_gen(&gen.gen)?, value, "value")?;
            let class = b.classify();
            Ok(Report::new(&json!({"value": b.view(), "class": class}), class.to_string()))
        }
        Command::Cross { gen, left, right } => {
            let gen = load_gen(&gen.gen)?;
            let (b, c) = (literal(&gen, left, "left")?, literal(&gen, right, "right")?);
            let product = b.cross(&c).map_err(|e| CliError::Numerical(e.to_string()))?;
            let body = json!({"left": b.view(), "right": c.view(), "product": product.view()});
            Ok(Report::new(&body, product.to_string()))
        }
        Command::AlphaLevel { gen, value, alpha } => {
            let b = literal(&load_gen(&gen.gen)?, value, "value")?;
            let level = b.realize_alpha(*alpha).map_err(CliError::usage)?;
            let body = json!({"value": b.view(), "alpha": alpha, "interval": level});
            Ok(Report::new(&body, format!("[{}, {}]", level.lo, level.hi)))
        }
        Command::Differentiate { f, order, at } => differentiate(f, *order, *at),
        Command::Integrate { f } => {
            let src = Source::resolve(f, None)?;
            let value = src.f()?.integrate(spec)?;
            let v = value.view();
            let body = json!({
                "domain": [src.domain.lo, src.domain.hi],
                "r": v.r, "q": v.q, "center": v.center, "class": v.class,
            });
            Ok(Report::new(&body, format!("{value} (center {})", v.center)))
        }
        Command::CriticalPoints { f, radius, samples } => critical(f, *radius, *samples),
        Command::Verify { check } => verify(check, spec),
    }
}

fn verify(check: &Check, spec: &QuadratureSpec) -> Result<Report, CliError> {
    match check {
        Check::Lagrange { f, harness, t0, scan } => {
            let src = Source::resolve(f, None)?;
            let config = load_harness(harness.as_deref())?;
            let t0 = if *scan { None } else { t0.or(src.scenario.t0) };
            match t0 {
                Some(t0) => lagrange_point(&src.f()?, t0, &config, spec),
                None => lagrange_grid(&src.f()?, &config, spec),
            }
        }
        Check::DbrForward { f } => {
            let src = Source::resolve(f, None)?;
            let g = src.g()?;
            let f = if src.scenario.has_f() { src.f()? } else { g.derivative() };
            let report = dbr_forward_check(&f, &g, None, spec)?;
            let mut text = format!(
                "{}: max residual {:e} (tolerance {:e}); violation detected: {}\n",
                verdict(report.passed),
                report.max_residual,
                report.tolerance,
                report.violation_detected
            );
            for r in &report.records {
                let _ = writeln!(text, "  {:<12} {:e}", r.label, r.residual);
            }
            let grid = csv(
                ["index", "label", "r", "q", "residual"],
                report.records.iter().map(|r| {
                    [
                        r.index.to_string(),
                        r.label.clone(),
                        num(r.integral.r),
                        num(r.integral.q),
                        num(r.residual),
                    ]
                }),
            );
            Ok(Report::new(&report, text).passed(report.passed).with_csv(grid))
        }
        Check::DbrReconstruct { f, grid } => {
            let src = Source::resolve(f, None)?;
            let res = dbr_reconstruct(&src.f()?, *grid, spec)?;
            let text = format!(
                "u = {} + {}A\nmax |center residual| {:e}, max coordinate residual {:e}\n\
                 constant modulo the zero class: {}; constant: {}",
                res.u.r,
                res.u.q,
                res.max_center_residual,
                res.max_coordinate_residual,
                res.constant_modulo_zero_class,
                res.constant
            );
            let rows = res.residual_grid.iter().zip(&res.accumulated).zip(&res.g_tilde).map(|((p, acc), g)| {
                [
                    num(p.t),
                    num(acc.r),
                    num(acc.q),
                    num(g.r),
                    num(g.q),
                    num(p.center_residual),
                    num(p.coordinate_residual),
                ]
            });
            let grid = csv(
                ["t", "accumulated_r", "accumulated_q", "g_tilde_r", "g_tilde_q", "center_residual", "coordinate_residual"],
                rows,
            );
            Ok(Report::new(&res, text).with_csv(grid))
        }
        Check::Interchange { f, eps0 } => {
            let src = Source::resolve(f, None)?;
            let eps0 = eps0
                .or(src.scenario.eps0)
                .ok_or_else(|| CliError::usage("interchange needs --eps0 or a scenario with 'eps0'"))?;
            let g = src.scenario.two_param(&src.gen)?;
            let report = interchange_check(&g, eps0, spec)?;
            let text = format!("{}: residual {:e} at eps0 = {eps0}", verdict(report.passed), report.residual);
            Ok(Report::new(&report, text).passed(report.passed))
        }
        Check::Ftc { f } => {
            let src = Source::resolve(f, None)?;
            let report = ftc_check(&src.f()?, spec)?;
            let worst = report.spot_checks.iter().map(|s| s.residual).fold(0.0, f64::max);
            let text = format!(
                "{}: residual {:e} (tolerance {:e}); worst spot check {:e}",
                verdict(report.passed),
                report.residual,
                report.tolerance,
                worst
            );
            Ok(Report::new(&report, text).passed(report.passed))
        }
        Check::Ibp { f } => {
            let src = Source::resolve(f, None)?;
            let report = ibp_check(&src.f()?, &src.g()?, spec)?;
            let text = format!("{}: residual {:e} (tolerance {:e})", verdict(report.passed), report.residual, report.tolerance);
            Ok(Report::new(&report, text).passed(report.passed))
        }
        Check::SquareIntegral { f } => {
            let src = Source::resolve(f, None)?;
            let report = square_integral(&src.f()?, spec)?;
            let text = format!(
                "{}: center of the integral {:e}; grid violation fraction {}",
                verdict(report.passed),
                report.integral.center,
                report.violation_fraction
            );
            Ok(Report::new(&report, text).passed(report.passed))
        }
    }
}

fn compare(gen: &GenArg, left: &str, right: &str) -> Result<Report, CliError> {
    let gen = load_gen(&gen.gen)?;
    let (b, c) = (literal(&gen, left, "left")?, literal(&gen, right, "right")?);
    let Comparison { ordering, tier } = b.compare_detailed(&c).map_err(CliError::usage)?;
    let ordering = format!("{ordering:?}");
    let text = match tier {
        Some(t) => format!("{ordering} (tier {t:?})"),
        None => ordering.clone(),
    };
    let body = json!({"left": b.view(), "right": c.view(), "ordering": ordering, "tier": tier});
    Ok(Report::new(&body, text))
}

fn differentiate(args: &FnArgs, order: usize, at: Option<f64>) -> Result<Report, CliError> {
    let src = Source::resolve(args, None)?;
    let d = src.f()?.nth_derivative(order)?;
    let value = at.map(|t| d.at(t)).transpose()?;
    let mut text = format!("r' = {}\nq' = {}", d.r(), d.q());
    if let (Some(t), Some(v)) = (at, &value) {
        let _ = write!(text, "\nat t = {t}: {v}");
    }
    let body = json!({
        "order": order,
        "r": d.r().to_string(),
        "q": d.q().to_string(),
        "at": at.zip(value).map(|(t, v)| json!({"t": t, "value": v.view()})),
    });
    Ok(Report::new(&body, text))
}

fn critical(args: &FnArgs, radius: f64, samples: usize) -> Result<Report, CliError> {
    #[derive(Serialize)]
    struct Point {
        #[serde(flatten)]
        point: lcfn::variational::CriticalPoint,
        verification: lcfn::variational::LocalOrderReport,
    }
    let src = Source::resolve(args, Some(CRITICAL_POINTS_DOMAIN))?;
    let f = src.f()?;
    let mut points = Vec::new();
    let mut text = String::new();
    for cp in critical_points(&f)? {
        let verification = verify_local_order(&f, &cp, radius, samples)?;
        let _ = writeln!(
            text,
            "{:?} at t* = {} (g' = {:e}, g'' = {}): {:?}",
            cp.verdict, cp.t_star, cp.center_d1, cp.center_d2, verification.status
        );
        points.push(Point { point: cp, verification });
    }
    if points.is_empty() {
        text.push_str("no critical points");
    }
    let passed = points.iter().all(|p| p.verification.passed());
    let body = json!({"domain": [src.domain.lo, src.domain.hi], "points": points});
    Ok(Report::new(&body, text).passed(passed))
}

fn lagrange_point(f: &FuzzyFn, t0: f64, config: &HarnessConfig, spec: &QuadratureSpec) -> Result<Report, CliError> {
    config.validate()?;
    let center = f.center_at(t0)?;
    let k_max = *config.k.iter().max().expect("validated nonempty");
    let mut sequence = Vec::new();
    let mut limit = None;
    if center.abs() > CENTER_THRESHOLD {
        for &k in &config.k {
            let w = lagrange_witness(f, t0, DiracParams::new(config.epsilon, config.l, k), spec)?;
            limit = Some(w.limit);
            sequence.push(json!({"k": k, "b_k": w.b_k}));
        }
    }
    let values: Vec<f64> = sequence.iter().filter_map(|v| v["b_k"].as_f64()).collect();
    let last_positive = values.last().map(|&b| b > 0.0);
    let recovery = lagrange_recover(f, t0, DiracParams::new(config.epsilon, config.l, k_max), spec)?;
    let passed = last_positive.unwrap_or(true) && recovery.passed;

    let mut text = format!("{}: t0 = {t0}, center {center}\n", verdict(passed));
    match limit {
        Some(limit) => {
            for (k, b) in config.k.iter().zip(&values) {
                let _ = writeln!(text, "  b_{k} = {b}");
            }
            let _ = writeln!(text, "  limit {limit}");
        }
        None => text.push_str("  center is zero; no witness sequence\n"),
    }
    let _ = write!(
        text,
        "  recovery ({}, {}) vs ({}, {}), error {:e}",
        recovery.recovered[0], recovery.recovered[1], recovery.direct[0], recovery.direct[1], recovery.error
    );
    let body = json!({
        "mode": "point",
        "config": config,
        "note": LIMIT_NOTE,
        "t0": t0,
        "center": center,
        "b_k": sequence,
        "limit": limit,
        "witness_positive": last_positive,
        "recovery": recovery,
        "passed": passed,
    });
    Ok(Report::new(&body, text).passed(passed))
}

fn lagrange_grid(f: &FuzzyFn, config: &HarnessConfig, spec: &QuadratureSpec) -> Result<Report, CliError> {
    let report = lagrange_scan(f, config, spec)?;
    let s = &report.summary;
    let text = format!(
        "{}: {} points, {} with nonzero center, {} positive witnesses, {} recovery failures (max error {:e})",
        verdict(s.passed),
        s.points,
        s.admissible,
        s.positive_witnesses,
        s.recovery_failures,
        s.max_recovery_error
    );
    let rows = report.records.iter().map(|r| {
        let opt = |v: Option<String>| v.unwrap_or_default();
        [
            r.index.to_string(),
            num(r.t0),
            num(r.epsilon),
            num(r.center),
            opt(r.b_k.as_ref().and_then(|b| b.last()).map(|&b| num(b))),
            opt(r.witness_positive.map(|p| p.to_string())),
            num(r.recovery.recovered[0]),
            num(r.recovery.recovered[1]),
            num(r.recovery.error),
        ]
    });
    let grid = csv(
        ["index", "t0", "epsilon", "center", "b_k_last", "witness_positive", "recovered_r", "recovered_q", "recovery_error"],
        rows,
    );
    let mut body = serde_json::to_value(&report).expect("reports serialize");
    body["mode"] = json!("scan");
    let passed = s.passed;
    Ok(Report::new(&body, text).passed(passed).with_csv(grid))
}

/// A fuzzy function assembled from a scenario and command-line overrides.
struct Source {
    scenario: Scenario,
    gen: Arc<GeneratorA>,
    domain: Interval,
}

impl Source {
    fn resolve(args: &FnArgs, default_domain: Option<[f64; 2]>) -> Result<Self, CliError> {
        let mut scenario = match &args.scenario {
            Some(path) => Some(Scenario::load(path)?),
            None => None,
        };
        let gen = match (&args.gen, &scenario) {
            (Some(path), _) => load_gen(path)?,
            (None, Some(s)) => s.generator()?.ok_or_else(|| CliError::usage("scenario has no 'gen'; pass --gen"))?,
            (None, None) => return Err(CliError::usage("a generator is required: pass --gen or --scenario")),
        };
        let domain = match (&args.domain, &scenario) {
            (Some(d), _) => [d[0], d[1]],
            (None, Some(s)) => s.domain,
            (None, None) => default_domain.ok_or_else(|| CliError::usage("a domain is required: pass --domain or --scenario"))?,
        };
        let mut s = scenario.take().unwrap_or(Scenario {
            name: None,
            gen: None,
            domain,
            r: None,
            q: None,
            g: None,
            eps0: None,
            t0: None,
        });
        s.domain = domain;
        if args.r.is_some() {
            s.r = args.r.clone();
        }
        if args.q.is_some() {
            s.q = args.q.clone();
        }
        let interval = Interval::new(domain[0], domain[1]);
        Ok(Source { scenario: s, gen, domain: interval })
    }

    fn f(&self) -> Result<FuzzyFn, CliError> {
        if !self.scenario.has_f() {
            return Err(CliError::usage("no function given: pass --r/--q or a scenario with 'r'/'q'"));
        }
        Ok(self.scenario.f(&self.gen)?)
    }

    fn g(&self) -> Result<FuzzyFn, CliError> {
        if self.scenario.g.is_none() {
            return Err(CliError::usage("this check needs a scenario with 'g'"));
        }
        Ok(self.scenario.g(&self.gen)?)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

fn load_gen(path: &Path) -> Result<Arc<GeneratorA>, CliError> {
    let config: GeneratorConfig = serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let gen = GeneratorA::from_config(&config).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    Ok(Arc::new(gen))
}

fn load_harness(path: Option<&Path>) -> Result<HarnessConfig, CliError> {
    let config: HarnessConfig = match path {
        Some(p) => serde_json::from_str(&read(p)?).map_err(|e| CliError::usage(format!("{}: {e}", p.display())))?,
        None => HarnessConfig::default(),
    };
    config.validate()?;
    Ok(config)
}

fn literal(gen: &Arc<GeneratorA>, src: &str, which: &str) -> Result<Lcfn, CliError> {
    Lcfn::parse_literal(src, gen).map_err(|e| CliError::usage(format!("{which} operand '{src}': {e}")))
}
