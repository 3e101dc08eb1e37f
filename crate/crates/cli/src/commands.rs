//! The five commands.

use haarlab_core::group::{GroupSpec, PositiveCompact};
use haarlab_core::haar::{chaar_estimate, haar_measure_estimate};
use haarlab_core::measure::{Measure, MeasureSpec};
use haarlab_core::product::{
    fubini, fubini_conditions, fubini_integrability_check, prod_measure, symmetric_formula_check, tonelli_check,
    SimpleFunc2D, StepFuncVec2D,
};
use haarlab_core::report::{CheckReport, Quantity, Record, Verdict};
use haarlab_core::selftest::selftest;
use haarlab_core::setalg::Subset;
use haarlab_core::uniqueness::uniqueness_check;
use haarlab_core::{Bound, ExtNonneg, Rat};
use serde_json::{json, Value};

use crate::config::{parse_payload, parse_regions, parse_subset, parse_subsets, Command, ExperimentConfig};
use crate::report::Report;
use crate::CliError;

/// Runs the configured command on the current thread pool.
pub fn run(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let command = cfg.command.ok_or_else(|| CliError::Input("command: none given".into()))?;
    let (result, checks) = match command {
        Command::HaarApprox => haar_approx(cfg)?,
        Command::ProductCheck => product_check(cfg)?,
        Command::FubiniCheck => fubini_cmd(cfg)?,
        Command::UniquenessCheck => uniqueness_cmd(cfg)?,
        Command::Selftest => selftest_cmd(cfg)?,
    };
    Ok(Report::new(command.to_string(), cfg.seed, cfg.echo(), result, checks))
}

/// [`run`] on a pool of `cfg.threads` workers when set.
pub fn run_with_threads(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    match cfg.threads {
        None => run(cfg),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Input(format!("threads: {e}")))?
            .install(|| run(cfg)),
    }
}

type Outcome = (Option<Value>, Vec<CheckReport>);

fn default_measure(g: &GroupSpec) -> MeasureSpec {
    if g.is_discrete() {
        MeasureSpec::counting()
    } else {
        MeasureSpec::lebesgue(Rat::one())
    }
}

fn measure(cfg: &ExperimentConfig, g: &GroupSpec, field: &str, v: &Option<Value>) -> Result<Measure, CliError> {
    let spec = cfg.measure(field, v, default_measure(g))?;
    Measure::new(g.clone(), spec).map_err(|e| CliError::Input(format!("{field}: {e}")))
}

/// The compact set whose prehaar values are reported: the closure on the
/// continuous groups.
fn compact_hull(g: &GroupSpec, s: &Subset) -> Result<Subset, CliError> {
    let s = g.normalize(s)?;
    match (&s, g.is_discrete()) {
        (Subset::Intervals(i), false) if i.is_bounded() => Ok(Subset::Intervals(i.closure())),
        (Subset::Intervals(i), _) if !i.is_bounded() => {
            Err(CliError::Input(format!("target: {i} is unbounded; prehaar values need a bounded set")))
        }
        _ => Ok(s),
    }
}

enum Reference {
    Exact(ExtNonneg),
    Float(f64),
}

/// The measure the estimate should reproduce: length, counting, or
/// `∫ dx/x` on the multiplicative group, each normalised at `K₀`.
fn reference(g: &GroupSpec, k0: &Subset, a: &Subset) -> Result<Reference, CliError> {
    match g {
        GroupSpec::PosMul => {
            let log_len = |s: &Subset| -> Option<f64> {
                let iv = s.as_intervals().ok()?;
                iv.intervals()
                    .iter()
                    .map(|(lo, hi)| match (lo, hi) {
                        (Bound::Fin(a), Bound::Fin(b)) => Some((b.to_f64() / a.to_f64()).ln()),
                        _ => None,
                    })
                    .sum()
            };
            match (log_len(a), log_len(k0)) {
                (Some(x), Some(y)) => Ok(Reference::Float(x / y)),
                _ => Ok(Reference::Exact(ExtNonneg::Infinity)),
            }
        }
        _ => {
            let m = Measure::new(g.clone(), default_measure(g))?;
            Ok(Reference::Exact(m.eval(a)?.checked_div(&m.eval(k0)?)?))
        }
    }
}

fn haar_approx(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let g = cfg.group()?;
    let k0 = parse_subset("k0", &g, cfg.required("k0", &cfg.k0)?)?;
    let target = parse_subset("target", &g, cfg.required("target", &cfg.target)?)?;
    let pk0 = PositiveCompact::new(&g, &k0).map_err(|e| CliError::Input(format!("k0: {e}")))?;
    let hull = compact_hull(&g, &target)?;
    let est = chaar_estimate(&g, &pk0, std::slice::from_ref(&hull), cfg.n_max)?;
    let bracket = haar_measure_estimate(&g, &k0, &target, cfg.n_max, &cfg.schedule)?;
    let reference = reference(&g, &k0, &target)?;

    let mut rep = CheckReport::new("haar_approx");
    for (i, h) in est.values[0].iter().enumerate() {
        rep.push(
            Record::new(0, "h_Vn(K)")
                .input("K", &hull)
                .input("n", i + 1)
                .value(Quantity::rat("prehaar", h)),
        );
    }
    let lo_tol = bracket.lo.as_finite().map(|x| x - &cfg.tolerance);
    let hi_tol = &bracket.hi + &ExtNonneg::Finite(cfg.tolerance.clone());
    let (ref_q, ref_text, inside) = match &reference {
        Reference::Exact(x) => (
            Quantity::ext("reference", x),
            x.to_string(),
            lo_tol.as_ref().is_none_or(|lo| ExtNonneg::Finite(lo.clone().max(Rat::zero())) <= *x) && *x <= hi_tol,
        ),
        Reference::Float(x) => (
            Quantity::float("reference", *x),
            Quantity::float("reference", *x).decimal,
            lo_tol.as_ref().is_none_or(|lo| lo.to_f64() <= *x) && hi_tol.to_f64() >= *x,
        ),
    };
    rep.push(
        Record::new(0, "reference within the Haar bracket")
            .input("K0", &k0)
            .input("A", &target)
            .value(Quantity::bracket("haar", &bracket.lo, &bracket.hi))
            .value(Quantity::rat("cauchy_gap", &est.cauchy_gap))
            .value(ref_q)
            .pass_if(inside),
    );
    let dec = |x: &ExtNonneg| Quantity::ext("", x).decimal;
    let result = json!({
        "target_hull": hull.to_string(),
        "values": est.values[0].iter().enumerate().map(|(i, h)| json!({
            "n": i + 1,
            "prehaar": h.to_string(),
            "decimal": h.to_decimal(12),
        })).collect::<Vec<_>>(),
        "cauchy_gap": est.cauchy_gap.to_string(),
        "bracket": [dec(&bracket.lo), dec(&bracket.hi)],
        "bracket_exact": [bracket.lo.to_string(), bracket.hi.to_string()],
        "exact": bracket.exact,
        "reference": ref_text,
    });
    Ok((Some(result), vec![rep]))
}

fn product_check(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let g = cfg.group()?;
    let mu = measure(cfg, &g, "mu", &cfg.mu)?;
    let nu = measure(cfg, &g, "nu", &cfg.nu)?;
    let regions = parse_regions("sets", cfg.required("sets", &cfg.sets)?)?;
    let mut sym = CheckReport::new("transpose_symmetry");
    let mut values = Vec::new();
    for r in &regions {
        values.push(prod_measure(&mu, &nu, r)?.to_string());
        sym.extend(symmetric_formula_check(&mu, &nu, r)?);
    }
    let mut checks = vec![sym];
    if let Some(f) = &cfg.f {
        let f: SimpleFunc2D = parse_payload("f", f)?;
        checks.push(tonelli_check(&mu, &nu, &f)?);
    }
    Ok((Some(json!({ "product_measures": values })), checks))
}

fn fubini_cmd(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let g = cfg.group()?;
    let mu = measure(cfg, &g, "mu", &cfg.mu)?;
    let nu = measure(cfg, &g, "nu", &cfg.nu)?;
    let f: StepFuncVec2D = parse_payload("f", cfg.required("f", &cfg.f)?)?;
    let mut checks = vec![fubini_integrability_check(&mu, &nu, &f)?];
    let cond = fubini_conditions(&mu, &nu, &f)?;
    let result = if cond.integrable {
        checks.push(haarlab_core::product::fubini_check(&mu, &nu, &f)?);
        let v = fubini(&mu, &nu, &f)?;
        json!({
            "integrable": true,
            "double": v.double.to_string(),
            "iterated_x": v.iter_x.to_string(),
            "iterated_y": v.iter_y.to_string(),
        })
    } else {
        checks.push(CheckReport::with_records(
            "fubini",
            [Record::new(0, "three-way equality")
                .verdict(Verdict::Exempt)
                .note("f is not integrable over μ×ν; the equalities are not asserted")],
        ));
        json!({ "integrable": false })
    };
    Ok((Some(result), checks))
}

fn uniqueness_cmd(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let g = cfg.group()?;
    let nu = measure(cfg, &g, "nu", &Some(cfg.required("nu", &cfg.nu)?.clone()))?;
    let k0 = parse_subset("k0", &g, cfg.required("k0", &cfg.k0)?)?;
    let sets = parse_subsets("sets", &g, cfg.required("sets", &cfg.sets)?)?;
    let rep = uniqueness_check(&g, &nu, &k0, &sets, cfg.n_max, &cfg.schedule, &cfg.tolerance)?;
    Ok((None, vec![rep]))
}

fn selftest_cmd(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let st = selftest(cfg.seed, cfg.suites.as_deref()).map_err(|e| CliError::Input(format!("suites: {e}")))?;
    let result = json!({
        "suites": st.suites.iter().map(|s| json!({ "suite": s.suite, "summary": s.summary })).collect::<Vec<_>>(),
    });
    let checks = st
        .suites
        .into_iter()
        .flat_map(|s| {
            let name = s.suite;
            s.checks.into_iter().map(move |mut c| {
                c.check = format!("{name}/{}", c.check);
                c
            })
        })
        .collect();
    Ok((Some(result), checks))
}
