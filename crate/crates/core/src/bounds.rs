//! Sample-size bounds: the epsilon-approximation and relative
//! (p, epsilon)-approximation theorems, the six per-task plans built on them,
//! and the prior-work bounds used for comparison.
//!
//! All logarithms are natural. Sizes are ceiled to integers and clamped to
//! the population size; a clamped plan means the "sample" is the whole
//! dataset and the downstream guarantee holds deterministically.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};

/// The absolute constants of the approximation theorems. Experiments in the
/// literature put `c` at no more than 0.5; nothing is known for `c_prime`,
/// and 0.5 works well in practice, so both default to 0.5.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub c: f64,
    pub c_prime: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants { c: 0.5, c_prime: 0.5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Fi,
    TopK,
    Ar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Absolute,
    Relative,
}

/// Which mining task to approximate, at which accuracy.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskSpec {
    pub task: Task,
    pub mode: Mode,
    pub epsilon: f64,
    pub delta: f64,
    pub theta: Option<f64>,
    pub gamma: Option<f64>,
    pub k: Option<usize>,
}

impl TaskSpec {
    pub fn fi(mode: Mode, theta: f64, epsilon: f64, delta: f64) -> Self {
        TaskSpec {
            task: Task::Fi,
            mode,
            epsilon,
            delta,
            theta: Some(theta),
            gamma: None,
            k: None,
        }
    }

    pub fn topk(mode: Mode, k: usize, epsilon: f64, delta: f64) -> Self {
        TaskSpec {
            task: Task::TopK,
            mode,
            epsilon,
            delta,
            theta: None,
            gamma: None,
            k: Some(k),
        }
    }

    pub fn ar(mode: Mode, theta: f64, gamma: f64, epsilon: f64, delta: f64) -> Self {
        TaskSpec {
            task: Task::Ar,
            mode,
            epsilon,
            delta,
            theta: Some(theta),
            gamma: Some(gamma),
            k: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_open_unit("epsilon", self.epsilon)?;
        check_open_unit("delta", self.delta)?;
        match self.task {
            Task::Fi | Task::Ar => {
                let theta = self
                    .theta
                    .ok_or_else(|| Error::InvalidParameter("theta is required".into()))?;
                check_half_open_unit("theta", theta)?;
            }
            Task::TopK => {
                let k = self
                    .k
                    .ok_or_else(|| Error::InvalidParameter("k is required".into()))?;
                if k == 0 {
                    return Err(Error::InvalidParameter("k must be >= 1".into()));
                }
            }
        }
        if self.task == Task::Ar {
            let gamma = self
                .gamma
                .ok_or_else(|| Error::InvalidParameter("gamma is required".into()))?;
            check_open_unit("gamma", gamma)?;
        }
        Ok(())
    }
}

fn check_open_unit(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must lie in (0, 1), got {v}"
        )))
    }
}

fn check_half_open_unit(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must lie in (0, 1], got {v}"
        )))
    }
}

fn check_d(d: usize) -> Result<()> {
    if d == 0 {
        Err(Error::InvalidParameter("d must be >= 1".into()))
    } else {
        Ok(())
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

/// A computed sample size with the adjusted mining thresholds and the
/// intermediate constants of the plan that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePlan {
    pub sample_size: u64,
    pub clamped: bool,
    pub adjusted_theta: Option<f64>,
    pub adjusted_gamma: Option<f64>,
    pub p: Option<f64>,
    pub eta: Option<f64>,
    pub phi: Option<f64>,
    pub second_stage: Option<Box<SamplePlan>>,
}

impl SamplePlan {
    fn sized(size: u64, clamped: bool) -> Self {
        SamplePlan {
            sample_size: size,
            clamped,
            adjusted_theta: None,
            adjusted_gamma: None,
            p: None,
            eta: None,
            phi: None,
            second_stage: None,
        }
    }

    /// key=value lines, one per present field.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        self.write_kv("", &mut out);
        out
    }

    fn write_kv(&self, prefix: &str, out: &mut String) {
        use std::fmt::Write;
        let _ = writeln!(out, "{prefix}sample_size={}", self.sample_size);
        let _ = writeln!(out, "{prefix}clamped={}", self.clamped);
        let fields = [
            ("adjusted_theta", self.adjusted_theta),
            ("adjusted_gamma", self.adjusted_gamma),
            ("p", self.p),
            ("eta", self.eta),
            ("phi", self.phi),
        ];
        for (name, value) in fields {
            if let Some(v) = value {
                let _ = writeln!(out, "{prefix}{name}={v}");
            }
        }
        if let Some(second) = &self.second_stage {
            second.write_kv("second_stage.", out);
        }
    }
}

fn ceil_clamp(raw: f64, population: u64) -> (u64, bool) {
    debug_assert!(raw > 0.0);
    let ceiled = raw.ceil();
    if ceiled >= population as f64 {
        (population, true)
    } else {
        (ceiled as u64, false)
    }
}

fn eps_approx_raw(d: usize, epsilon: f64, delta: f64, c: f64, population: u64) -> Result<f64> {
    check_d(d)?;
    check_open_unit("epsilon", epsilon)?;
    check_open_unit("delta", delta)?;
    check_positive("c", c)?;
    if population == 0 {
        return Err(Error::InvalidParameter("population must be >= 1".into()));
    }
    Ok(c / (epsilon * epsilon) * (d as f64 + (1.0 / delta).ln()))
}

/// Size sufficient for an epsilon-approximation of a range space of
/// VC-dimension at most `d`: `min(population, (c / eps^2) (d + ln(1/delta)))`.
pub fn eps_approx_size(d: usize, epsilon: f64, delta: f64, c: f64, population: u64) -> Result<u64> {
    let raw = eps_approx_raw(d, epsilon, delta, c, population)?;
    Ok(ceil_clamp(raw, population).0)
}

fn rel_approx_raw(
    d: usize,
    p: f64,
    epsilon: f64,
    delta: f64,
    c_prime: f64,
    population: u64,
) -> Result<f64> {
    check_d(d)?;
    check_open_unit("p", p)?;
    check_open_unit("epsilon", epsilon)?;
    check_open_unit("delta", delta)?;
    check_positive("c_prime", c_prime)?;
    if population == 0 {
        return Err(Error::InvalidParameter("population must be >= 1".into()));
    }
    Ok(c_prime / (epsilon * epsilon * p) * (d as f64 * (1.0 / p).ln() + (1.0 / delta).ln()))
}

/// Size sufficient for a relative (p, epsilon)-approximation:
/// `min(population, (c' / (eps^2 p)) (d ln(1/p) + ln(1/delta)))`.
///
/// The delta term is added: subtracting it, as one statement of the theorem
/// reads, would drive the size negative for small delta, and every
/// instantiation of the bound adds it.
pub fn rel_approx_size(
    d: usize,
    p: f64,
    epsilon: f64,
    delta: f64,
    c_prime: f64,
    population: u64,
) -> Result<u64> {
    let raw = rel_approx_raw(d, p, epsilon, delta, c_prime, population)?;
    Ok(ceil_clamp(raw, population).0)
}

/// Absolute FI plan: an (eps/2)-approximation sample, mined at `theta - eps/2`.
pub fn fi_abs_plan(
    theta: f64,
    epsilon: f64,
    delta: f64,
    d: usize,
    constants: &Constants,
    population: u64,
) -> Result<SamplePlan> {
    check_half_open_unit("theta", theta)?;
    check_open_unit("epsilon", epsilon)?;
    if theta <= epsilon / 2.0 {
        return Err(Error::InvalidParameter(format!(
            "absolute FI needs theta > epsilon/2 (theta {theta}, epsilon {epsilon})"
        )));
    }
    let raw = eps_approx_raw(d, epsilon / 2.0, delta, constants.c, population)?;
    let (size, clamped) = ceil_clamp(raw, population);
    let mut plan = SamplePlan::sized(size, clamped);
    plan.adjusted_theta = Some(theta - epsilon / 2.0);
    Ok(plan)
}

/// Relative FI plan: a relative (p, eps/2)-approximation sample with
/// `p = theta (2 - eps) / (2 + eps)`, mined at `(1 - eps/2) theta`.
pub fn fi_rel_plan(
    theta: f64,
    epsilon: f64,
    delta: f64,
    d: usize,
    constants: &Constants,
    population: u64,
) -> Result<SamplePlan> {
    check_half_open_unit("theta", theta)?;
    check_open_unit("epsilon", epsilon)?;
    let p = theta * (2.0 - epsilon) / (2.0 + epsilon);
    let raw = rel_approx_raw(d, p, epsilon / 2.0, delta, constants.c_prime, population)?;
    let (size, clamped) = ceil_clamp(raw, population);
    let mut plan = SamplePlan::sized(size, clamped);
    plan.adjusted_theta = Some((1.0 - epsilon / 2.0) * theta);
    plan.p = Some(p);
    Ok(plan)
}

/// Absolute top-K plan: an (eps/4)-approximation sample. The mining threshold
/// `f_S^(K) - eps/2` is fixed only after the sample's K-th frequency is known.
pub fn topk_abs_plan(
    epsilon: f64,
    delta: f64,
    d: usize,
    constants: &Constants,
    population: u64,
) -> Result<SamplePlan> {
    check_open_unit("epsilon", epsilon)?;
    let raw = eps_approx_raw(d, epsilon / 4.0, delta, constants.c, population)?;
    let (size, clamped) = ceil_clamp(raw, population);
    Ok(SamplePlan::sized(size, clamped))
}

/// Default first-stage oversampling factor for relative top-K: four times the
/// minimum `2 sqrt(2) / eps` the condition requires.
pub fn default_phi(epsilon: f64) -> f64 {
    4.0 * (2.0 * SQRT_2 / epsilon)
}

/// Splits a failure budget across the two relative top-K stages so that
/// `(1 - d1)(1 - d2) >= 1 - delta`, symmetrically.
pub fn delta_split(delta: f64) -> (f64, f64) {
    let half = 1.0 - (1.0 - delta).sqrt();
    (half, half)
}

/// First stage of relative top-K: size `phi c / eps^2 (d + ln(1/delta1))`,
/// valid for any `phi > 2 sqrt(2) / eps`.
pub fn topk_rel_stage1_plan(
    epsilon: f64,
    delta1: f64,
    phi: f64,
    d: usize,
    constants: &Constants,
    population: u64,
) -> Result<SamplePlan> {
    check_d(d)?;
    check_open_unit("epsilon", epsilon)?;
    check_open_unit("delta1", delta1)?;
    check_positive("c", constants.c)?;
    if phi <= 2.0 * SQRT_2 / epsilon {
        return Err(Error::InvalidParameter(format!(
            "phi must exceed 2*sqrt(2)/epsilon = {}",
            2.0 * SQRT_2 / epsilon
        )));
    }
    let raw = phi * constants.c / (epsilon * epsilon) * (d as f64 + (1.0 / delta1).ln());
    let (size, clamped) = ceil_clamp(raw, population);
    let mut plan = SamplePlan::sized(size, clamped);
    plan.phi = Some(phi);
    Ok(plan)
}

/// Second stage of relative top-K, available once the first-stage sample's
/// K-th frequency `fk1` satisfies `fk1 >= 2 sqrt(2) / (eps phi)`. Binds the
/// frequency floor to `fk1 - eps / sqrt(2 phi)` (the first stage's accuracy),
/// sizes a relative (p, eps/2)-approximation at `p = (2 - eps) floor /
/// (2 + eps)`, and mines at `(1 - eps/2) floor`.
#[allow(clippy::too_many_arguments)]
pub fn topk_rel_stage2_plan(
    fk1: f64,
    epsilon: f64,
    delta2: f64,
    phi: f64,
    d: usize,
    constants: &Constants,
    population: u64,
) -> Result<SamplePlan> {
    check_open_unit("epsilon", epsilon)?;
    check_positive("phi", phi)?;
    let theta_floor = fk1 - epsilon / (2.0 * phi).sqrt();
    if theta_floor <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "first-stage K-th frequency {fk1} is below the stage accuracy {}",
            epsilon / (2.0 * phi).sqrt()
        )));
    }
    let p = (2.0 - epsilon) * theta_floor / (2.0 + epsilon);
    let raw = rel_approx_raw(d, p, epsilon / 2.0, delta2, constants.c, population)?;
    let (size, clamped) = ceil_clamp(raw, population);
    let mut plan = SamplePlan::sized(size, clamped);
    plan.adjusted_theta = Some((1.0 - epsilon / 2.0) * theta_floor);
    plan.p = Some(p);
    plan.phi = Some(phi);
    Ok(plan)
}

/// AR plan, both modes. Absolute mode first rescales to
/// `eps_rel = eps / max(theta, gamma)` and then proceeds as relative:
/// `phi = max(3, 2 - eps + 2 sqrt(1 - eps))`, `eta = eps / phi`,
/// `p = theta (1 - eta) / (1 + eta)`, a relative (p, eta)-approximation
/// sample, mined at thresholds `(1 - eta) theta` and
/// `gamma (1 - eta) / (1 + eta)`.
#[allow(clippy::too_many_arguments)]
pub fn ar_plan(
    theta: f64,
    gamma: f64,
    epsilon: f64,
    delta: f64,
    mode: Mode,
    d: usize,
    constants: &Constants,
    population: u64,
) -> Result<SamplePlan> {
    check_half_open_unit("theta", theta)?;
    check_open_unit("gamma", gamma)?;
    check_open_unit("epsilon", epsilon)?;
    let eps = match mode {
        Mode::Relative => epsilon,
        Mode::Absolute => {
            let rescaled = epsilon / theta.max(gamma);
            if rescaled >= 1.0 {
                return Err(Error::InvalidParameter(format!(
                    "absolute AR needs epsilon < max(theta, gamma), got epsilon {epsilon} \
                     against max {}",
                    theta.max(gamma)
                )));
            }
            rescaled
        }
    };
    let phi = 3.0_f64.max(2.0 - eps + 2.0 * (1.0 - eps).sqrt());
    let eta = eps / phi;
    let p = theta * (1.0 - eta) / (1.0 + eta);
    let raw = rel_approx_raw(d, p, eta, delta, constants.c_prime, population)?;
    let (size, clamped) = ceil_clamp(raw, population);
    let mut plan = SamplePlan::sized(size, clamped);
    plan.adjusted_theta = Some((1.0 - eta) * theta);
    plan.adjusted_gamma = Some(gamma * (1.0 - eta) / (1.0 + eta));
    plan.p = Some(p);
    plan.eta = Some(eta);
    plan.phi = Some(phi);
    Ok(plan)
}

/// Plan for any task/mode pair. Relative top-K returns the first-stage plan
/// (with the default `phi`); its second stage depends on the first sample's
/// K-th frequency and is attached by the sampling pipeline.
pub fn sample_size(
    spec: &TaskSpec,
    d: usize,
    constants: &Constants,
    population: u64,
) -> Result<SamplePlan> {
    spec.validate()?;
    check_d(d)?;
    match (spec.task, spec.mode) {
        (Task::Fi, Mode::Absolute) => fi_abs_plan(
            spec.theta.expect("validated"),
            spec.epsilon,
            spec.delta,
            d,
            constants,
            population,
        ),
        (Task::Fi, Mode::Relative) => fi_rel_plan(
            spec.theta.expect("validated"),
            spec.epsilon,
            spec.delta,
            d,
            constants,
            population,
        ),
        (Task::TopK, Mode::Absolute) => {
            topk_abs_plan(spec.epsilon, spec.delta, d, constants, population)
        }
        (Task::TopK, Mode::Relative) => {
            let (delta1, _) = delta_split(spec.delta);
            topk_rel_stage1_plan(
                spec.epsilon,
                delta1,
                default_phi(spec.epsilon),
                d,
                constants,
                population,
            )
        }
        (Task::Ar, mode) => ar_plan(
            spec.theta.expect("validated"),
            spec.gamma.expect("validated"),
            spec.epsilon,
            spec.delta,
            mode,
            d,
            constants,
            population,
        ),
    }
}

/// The best previously published sizes, defined only for relative FI and
/// relative AR: `F / (eps^2 (1 - eps) theta) (Delta + 5 + ln(4 / ((1 - eps)
/// theta delta)))` with `F = 24` for FI and `F = 48` for AR.
pub fn prior_work_size(spec: &TaskSpec, delta_len: usize) -> Result<u64> {
    spec.validate()?;
    let factor = match (spec.task, spec.mode) {
        (Task::Fi, Mode::Relative) => 24.0,
        (Task::Ar, Mode::Relative) => 48.0,
        _ => return Err(Error::UnsupportedPriorWork),
    };
    let theta = spec.theta.expect("validated");
    let eps = spec.epsilon;
    let raw = factor / (eps * eps * (1.0 - eps) * theta)
        * (delta_len as f64 + 5.0 + (4.0 / ((1.0 - eps) * theta * spec.delta)).ln());
    Ok(raw.ceil() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HUGE: u64 = u64::MAX;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn eps_approx_examples() {
        assert_eq!(
            eps_approx_size(2, 0.1, 0.1, 0.5, 1_000_000_000).unwrap(),
            216
        );
        assert_eq!(eps_approx_size(2, 0.1, 0.1, 0.5, 100).unwrap(), 100);
        // Consistency: the absolute FI size at eps equals this bound at eps/2.
        assert_eq!(
            eps_approx_size(81, 0.005, 0.1, 0.5, HUGE).unwrap(),
            1_666_052
        );
    }

    #[test]
    fn rel_approx_examples() {
        let p = 0.01 * 1.95 / 2.05;
        let base = rel_approx_size(33, p, 0.025, 0.1, 0.5, HUGE).unwrap();
        // Same value the relative FI plan produces.
        assert_eq!(base, 13_113_570);
        let near_certain = rel_approx_size(33, p, 0.025, 1.0 - 1e-9, 0.5, HUGE).unwrap();
        assert!(near_certain < base);
        assert_eq!(rel_approx_size(33, p, 0.025, 0.1, 0.5, 1).unwrap(), 1);
    }

    #[test]
    fn fi_abs_plan_matches_hand_evaluation() {
        let plan = fi_abs_plan(0.02, 0.01, 0.1, 81, &Constants::default(), 1_000_000_000).unwrap();
        assert_eq!(plan.sample_size, 1_666_052);
        assert!(!plan.clamped);
        assert_eq!(plan.adjusted_theta, Some(0.02 - 0.005));
        assert!(fi_abs_plan(0.004, 0.01, 0.1, 81, &Constants::default(), HUGE).is_err());
    }

    #[test]
    fn fi_rel_plan_matches_high_precision_value() {
        let plan = fi_rel_plan(0.01, 0.05, 0.1, 33, &Constants::default(), HUGE).unwrap();
        assert_eq!(plan.sample_size, 13_113_570);
        assert!(close(plan.adjusted_theta.unwrap(), 0.00975, 1e-12));
        assert!(close(plan.p.unwrap(), 0.01 * 1.95 / 2.05, 1e-12));

        let clamped = fi_rel_plan(0.01, 0.05, 0.1, 33, &Constants::default(), 10_000_000).unwrap();
        assert!(clamped.clamped);
        assert_eq!(clamped.sample_size, 10_000_000);
    }

    #[test]
    fn topk_abs_plan_matches_hand_evaluation() {
        let plan = topk_abs_plan(0.01, 0.1, 81, &Constants::default(), HUGE).unwrap();
        assert_eq!(plan.sample_size, 6_664_207);
    }

    #[test]
    fn topk_rel_stage1_requires_phi_above_floor() {
        let c = Constants::default();
        assert!(topk_rel_stage1_plan(0.05, 0.05, 10.0, 5, &c, HUGE).is_err());
        let phi = default_phi(0.05);
        assert!(close(phi, 226.27416997969522, 1e-12));
        let plan = topk_rel_stage1_plan(0.05, 0.0513167019494862, phi, 5, &c, HUGE).unwrap();
        assert_eq!(plan.sample_size, 360_670);
        assert_eq!(plan.phi, Some(phi));
    }

    #[test]
    fn topk_rel_stage2_binds_the_frequency_floor() {
        let c = Constants::default();
        let phi = default_phi(0.05);
        let plan = topk_rel_stage2_plan(0.5, 0.05, 0.0513167019494862, phi, 5, &c, HUGE).unwrap();
        assert_eq!(plan.sample_size, 11_339);
        assert!(close(plan.adjusted_theta.unwrap(), 0.4852083824901505, 1e-12));
        // fk1 below the stage-one accuracy cannot be floored.
        assert!(topk_rel_stage2_plan(1e-4, 0.05, 0.05, phi, 5, &c, HUGE).is_err());
    }

    #[test]
    fn ar_plan_relative_constants() {
        let plan = ar_plan(
            0.01,
            0.5,
            0.05,
            0.1,
            Mode::Relative,
            33,
            &Constants::default(),
            HUGE,
        )
        .unwrap();
        assert!(close(plan.phi.unwrap(), 3.899358868961793, 1e-12));
        assert!(close(plan.eta.unwrap(), 0.012822620764144373, 1e-12));
        assert!(close(plan.p.unwrap(), 0.009746794344808964, 1e-12));
        assert!(close(plan.adjusted_theta.unwrap(), 0.009871773792358556, 1e-12));
        assert!(close(plan.adjusted_gamma.unwrap(), 0.4873397172404482, 1e-12));
        assert_eq!(plan.sample_size, 48_397_298);
    }

    #[test]
    fn ar_plan_absolute_rescales_epsilon() {
        let abs = ar_plan(
            0.02,
            0.5,
            0.01,
            0.1,
            Mode::Absolute,
            33,
            &Constants::default(),
            HUGE,
        )
        .unwrap();
        let rel = ar_plan(
            0.02,
            0.5,
            0.02,
            0.1,
            Mode::Relative,
            33,
            &Constants::default(),
            HUGE,
        )
        .unwrap();
        assert_eq!(abs, rel);
        // epsilon at or above max(theta, gamma) cannot be rescaled into (0,1).
        assert!(ar_plan(
            0.02,
            0.5,
            0.6,
            0.1,
            Mode::Absolute,
            33,
            &Constants::default(),
            HUGE
        )
        .is_err());
    }

    #[test]
    fn dispatcher_routes_all_tasks() {
        let c = Constants::default();
        let plan = sample_size(
            &TaskSpec::fi(Mode::Absolute, 0.02, 0.01, 0.1),
            81,
            &c,
            1_000_000_000,
        )
        .unwrap();
        assert_eq!(plan.sample_size, 1_666_052);

        let plan = sample_size(&TaskSpec::topk(Mode::Absolute, 5, 0.01, 0.1), 81, &c, HUGE).unwrap();
        assert_eq!(plan.sample_size, 6_664_207);

        let plan =
            sample_size(&TaskSpec::topk(Mode::Relative, 5, 0.05, 0.1), 5, &c, HUGE).unwrap();
        assert_eq!(plan.sample_size, 360_670);
        assert!(plan.second_stage.is_none());

        assert!(sample_size(&TaskSpec::fi(Mode::Absolute, 1.5, 0.01, 0.1), 5, &c, HUGE).is_err());
        assert!(sample_size(&TaskSpec::fi(Mode::Absolute, 0.5, 0.01, 1.0), 5, &c, HUGE).is_err());
        assert!(sample_size(&TaskSpec::fi(Mode::Absolute, 0.5, 0.01, 0.1), 0, &c, HUGE).is_err());
    }

    #[test]
    fn prior_work_examples() {
        let spec = TaskSpec::fi(Mode::Relative, 0.05, 0.05, 0.05);
        let prior = prior_work_size(&spec, 50).unwrap();
        assert_eq!(prior, 12_617_241);
        let ours = sample_size(&spec, 50, &Constants::default(), HUGE)
            .unwrap()
            .sample_size;
        assert_eq!(ours, 2_611_938);
        assert!(ours < prior);

        let ar = TaskSpec::ar(Mode::Relative, 0.05, 0.5, 0.05, 0.05);
        assert_eq!(prior_work_size(&ar, 50).unwrap(), 25_234_481);

        assert!(matches!(
            prior_work_size(&TaskSpec::fi(Mode::Absolute, 0.05, 0.05, 0.05), 50),
            Err(Error::UnsupportedPriorWork)
        ));
        assert!(matches!(
            prior_work_size(&TaskSpec::topk(Mode::Relative, 3, 0.05, 0.05), 50),
            Err(Error::UnsupportedPriorWork)
        ));
    }

    #[test]
    fn sizes_are_monotone_pre_clamp() {
        let c = Constants::default();
        // Non-decreasing in d.
        let mut last = 0;
        for d in [1, 2, 5, 20, 80] {
            let s = sample_size(&TaskSpec::fi(Mode::Absolute, 0.1, 0.05, 0.1), d, &c, HUGE)
                .unwrap()
                .sample_size;
            assert!(s >= last);
            last = s;
        }
        // Non-increasing in epsilon and delta, for every task shape.
        let specs = |eps: f64, delta: f64| {
            vec![
                TaskSpec::fi(Mode::Absolute, 0.3, eps, delta),
                TaskSpec::fi(Mode::Relative, 0.05, eps, delta),
                TaskSpec::topk(Mode::Absolute, 10, eps, delta),
                TaskSpec::ar(Mode::Relative, 0.05, 0.6, eps, delta),
                TaskSpec::ar(Mode::Absolute, 0.3, 0.6, eps, delta),
            ]
        };
        for (lo, hi) in [(0.01, 0.02), (0.05, 0.1)] {
            for (a, b) in specs(lo, 0.1).into_iter().zip(specs(hi, 0.1)) {
                let sa = sample_size(&a, 20, &c, HUGE).unwrap().sample_size;
                let sb = sample_size(&b, 20, &c, HUGE).unwrap().sample_size;
                assert!(sa >= sb, "epsilon monotonicity broke for {a:?}");
            }
            for (a, b) in specs(0.05, lo).into_iter().zip(specs(0.05, hi)) {
                let sa = sample_size(&a, 20, &c, HUGE).unwrap().sample_size;
                let sb = sample_size(&b, 20, &c, HUGE).unwrap().sample_size;
                assert!(sa >= sb, "delta monotonicity broke for {a:?}");
            }
        }
        // Relative modes: non-increasing in theta.
        for (lo, hi) in [(0.01, 0.05), (0.05, 0.2)] {
            let sa = sample_size(&TaskSpec::fi(Mode::Relative, lo, 0.05, 0.1), 20, &c, HUGE)
                .unwrap()
                .sample_size;
            let sb = sample_size(&TaskSpec::fi(Mode::Relative, hi, 0.05, 0.1), 20, &c, HUGE)
                .unwrap()
                .sample_size;
            assert!(sa >= sb);
        }
    }

    #[test]
    fn kv_output_lists_present_fields() {
        let plan = ar_plan(
            0.01,
            0.5,
            0.05,
            0.1,
            Mode::Relative,
            33,
            &Constants::default(),
            HUGE,
        )
        .unwrap();
        let kv = plan.to_kv();
        assert!(kv.contains("sample_size=48397298"));
        assert!(kv.contains("clamped=false"));
        assert!(kv.contains("adjusted_gamma="));
        assert!(kv.contains("eta="));
        assert!(!kv.contains("second_stage"));
    }
}
