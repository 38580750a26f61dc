//! Poisson Galton-Watson functionals: survival probability and its
//! derivative, the dual (conjugate) parameter, Borel-Tanner and truncated
//! size-biased component-size laws, and conditioned tree samplers.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::numerics::roots::{bisect, newton_polish};
use crate::scalar::{ln_gamma, Scalar};
use crate::tree::RootedWeightedTree;
use crate::{domain_err, Result};

/// Fixed-point residual of the survival equation, `-expm1(-λθ) - θ`.
/// Positive below the survival probability and negative above it (λ > 1).
#[inline]
fn survival_residual<F: Scalar>(lambda: F, theta: F) -> F {
    -(-lambda * theta).exp_m1() - theta
}

/// Solver configuration for the survival fixed point and related roots.
///
/// `t_max` is the effective support cutoff: beyond it `1 - θ(t)` is below
/// 1e-15 and tail integrals are treated at `e^{-t}` scale.
#[derive(Debug, Clone, Copy)]
pub struct GwNumerics<F> {
    solver_tolerance: F,
    t_max: F,
}

impl<F: Scalar> Default for GwNumerics<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Scalar> GwNumerics<F> {
    pub fn new() -> Self {
        Self {
            solver_tolerance: F::of(1e-12),
            t_max: F::of(40.0),
        }
    }

    pub fn with_params(solver_tolerance: F, t_max: F) -> Result<Self> {
        if !(solver_tolerance > F::zero()) || !(t_max > F::one()) {
            return domain_err("GwNumerics requires solver_tolerance > 0 and t_max > 1");
        }
        let gw = Self {
            solver_tolerance,
            t_max,
        };
        let defect = F::one() - gw.theta(t_max)?;
        if defect >= F::of(1e-15) {
            return domain_err(format!(
                "t_max = {t_max} leaves survival defect {defect} >= 1e-15"
            ));
        }
        Ok(gw)
    }

    pub fn solver_tolerance(&self) -> F {
        self.solver_tolerance
    }

    pub fn t_max(&self) -> F {
        self.t_max
    }

    /// Survival probability of a Poisson(λ) branching process: the root in
    /// [0, 1) of `1 - θ = e^{-λθ}`, zero for λ ≤ 1.
    pub fn theta(&self, lambda: F) -> Result<F> {
        if !lambda.is_finite() || lambda < F::zero() {
            return domain_err(format!("theta: lambda = {lambda} outside [0, ∞)"));
        }
        Ok(self.theta_unchecked(lambda))
    }

    pub(crate) fn theta_unchecked(&self, lambda: F) -> F {
        if lambda <= F::one() {
            return F::zero();
        }
        let rough = bisect(
            |t| survival_residual(lambda, t),
            F::epsilon(),
            F::one(),
            self.solver_tolerance,
        );
        newton_polish(
            |t| survival_residual(lambda, t),
            |t| lambda * (F::one() + (-lambda * t).exp_m1()) - F::one(),
            rough,
            F::zero(),
            F::one(),
            4,
        )
    }

    /// Derivative of the survival probability for λ > 1, from implicit
    /// differentiation of the fixed point:
    /// `θ'(λ) = θ(1-θ) / (1 - λ(1-θ))`.
    pub fn theta_prime(&self, lambda: F) -> Result<F> {
        if !lambda.is_finite() || lambda <= F::one() {
            return domain_err(format!(
                "theta_prime: lambda = {lambda} outside (1, ∞); derivative is one-sided at 1"
            ));
        }
        let th = self.theta_unchecked(lambda);
        // 1 - λ(1-θ) written as λθ - (λ-1) to limit cancellation near λ = 1.
        let den = lambda * th - (lambda - F::one());
        Ok(th * (F::one() - th) / den)
    }

    /// Dual parameter: the conjugate root of `x e^{-x}`. Maps supercritical
    /// to subcritical and back; `dual(1) = 1`.
    pub fn dual(&self, c: F) -> Result<F> {
        if !c.is_finite() || c <= F::zero() {
            return domain_err(format!("dual: c = {c} outside (0, ∞)"));
        }
        if c == F::one() {
            return Ok(F::one());
        }
        let target = c * (-c).exp();
        let h = |x: F| x * (-x).exp() - target;
        let dh = |x: F| (F::one() - x) * (-x).exp();
        let (lo, hi) = if c > F::one() {
            (F::zero(), F::one())
        } else {
            (F::one(), F::of(745.0))
        };
        let rough = bisect(h, lo, hi, self.solver_tolerance);
        Ok(newton_polish(h, dh, rough, lo, hi, 4))
    }

    /// The unique λ > 1 where the survival derivative equals one, located by
    /// bracketing and bisection.
    pub fn theta_prime_unit_root(&self) -> F {
        let f = |x: F| self.theta_prime(x).expect("x > 1 inside bracket") - F::one();
        bisect(f, F::one() + F::of(1e-9), F::of(3.0), F::of(1e-12))
    }

    /// Inverse of the survival probability on [0, 1): the λ ≥ 1 with
    /// `θ(λ) = u`. Closed form from the fixed point: `λ = -ln(1-u)/u`.
    pub fn theta_inv(&self, u: F) -> Result<F> {
        if !u.is_finite() || u < F::zero() || u >= F::one() {
            return domain_err(format!("theta_inv: u = {u} outside [0, 1)"));
        }
        if u == F::zero() {
            return Ok(F::one());
        }
        Ok((-(-u).ln_1p()) / u)
    }
}

/// Borel-Tanner pmf: total-size law of a subcritical Poisson(λ)
/// Galton-Watson tree, `P(m) = e^{-λm}(λm)^{m-1} / (m · (m-1)!)`.
///
/// Computed in log space; valid for λ in (0, 1].
pub fn borel_tanner_pmf<F: Scalar>(lambda: F, m: u64) -> Result<F> {
    if !lambda.is_finite() || lambda <= F::zero() || lambda > F::one() {
        return domain_err(format!("borel_tanner_pmf: lambda = {lambda} outside (0, 1]"));
    }
    if m == 0 {
        return domain_err("borel_tanner_pmf: m must be >= 1");
    }
    Ok(borel_tanner_pmf_unchecked(lambda, m))
}

fn borel_tanner_pmf_unchecked<F: Scalar>(lambda: F, m: u64) -> F {
    if m == 1 {
        return (-lambda).exp();
    }
    if lambda == F::zero() {
        return F::zero();
    }
    let mf = F::of(m as f64);
    let ln_p = -lambda * mf + (mf - F::one()) * (lambda * mf).ln() - ln_gamma(mf) - mf.ln();
    ln_p.exp()
}

/// Pmf of the truncated size-biased component-size law for λ > 1:
/// `P(m) = (θ(λ)/θ'(λ)) e^{-λm}(λm)^{m-1}/(m-1)!`.
pub fn truncated_size_biased_pmf<F: Scalar>(
    gw: &GwNumerics<F>,
    lambda: F,
    m: u64,
) -> Result<F> {
    if !lambda.is_finite() || lambda <= F::one() {
        return domain_err(format!(
            "truncated_size_biased_pmf: lambda = {lambda} outside (1, ∞)"
        ));
    }
    if m == 0 {
        return domain_err("truncated_size_biased_pmf: m must be >= 1");
    }
    let th = gw.theta_unchecked(lambda);
    let thp = gw.theta_prime(lambda)?;
    let mf = F::of(m as f64);
    let ln_u = if m == 1 {
        -lambda
    } else {
        -lambda * mf + (mf - F::one()) * (lambda * mf).ln() - ln_gamma(mf)
    };
    Ok((th / thp) * ln_u.exp())
}

const TABLE_MASS_CUTOFF: f64 = 1e-12;

/// Cumulative-table inversion sampler shared by the two size laws.
///
/// `first` is the m = 1 probability and `ratio(m)` maps the m-th term to the
/// (m+1)-th. The table grows geometrically on demand and stops extending once
/// the cumulative mass exceeds `1 - 1e-12`; the residual goes to the last
/// bucket.
#[derive(Debug, Clone)]
struct SizeTable<F> {
    cum: Vec<F>,
    term: F,
    complete: bool,
}

impl<F: Scalar> SizeTable<F> {
    fn new(first: F) -> Self {
        Self {
            cum: vec![first],
            term: first,
            complete: false,
        }
    }

    fn extend(&mut self, target_len: usize, ratio: impl Fn(u64) -> F) {
        let cutoff = F::one() - F::of(TABLE_MASS_CUTOFF);
        while self.cum.len() < target_len && !self.complete {
            let m = self.cum.len() as u64; // current last index is pmf(m)
            self.term = self.term * ratio(m);
            let last = *self.cum.last().expect("table nonempty");
            let total = last + self.term;
            if total >= cutoff || total == last {
                self.complete = true;
            }
            self.cum.push(total);
        }
    }

    fn sample(&mut self, u: F, ratio: impl Fn(u64) -> F) -> u64 {
        loop {
            let last = *self.cum.last().expect("table nonempty");
            if u <= last || self.complete {
                // binary search for the first index with cum >= u
                let mut lo = 0usize;
                let mut hi = self.cum.len() - 1;
                while lo < hi {
                    let mid = (lo + hi) / 2;
                    if self.cum[mid] >= u {
                        hi = mid;
                    } else {
                        lo = mid + 1;
                    }
                }
                return (lo + 1) as u64;
            }
            let next = (self.cum.len() * 2).max(16);
            self.extend(next, &ratio);
        }
    }
}

/// Borel-Tanner(λ) law with a lazily extended inversion table. Sampling
/// requires λ < 1 (the critical law has infinite mean).
#[derive(Debug, Clone)]
pub struct BorelTannerLaw<F> {
    lambda: F,
    table: SizeTable<F>,
}

impl<F: Scalar> BorelTannerLaw<F> {
    pub fn new(lambda: F) -> Result<Self> {
        if !lambda.is_finite() || lambda < F::zero() || lambda >= F::one() {
            return domain_err(format!("BorelTannerLaw: lambda = {lambda} outside [0, 1)"));
        }
        Ok(Self {
            lambda,
            table: SizeTable::new((-lambda).exp()),
        })
    }

    pub fn lambda(&self) -> F {
        self.lambda
    }

    pub fn pmf(&self, m: u64) -> F {
        borel_tanner_pmf_unchecked(self.lambda, m)
    }

    pub fn sample(&mut self, rng: &mut impl Rng) -> u64 {
        let lambda = self.lambda;
        if lambda == F::zero() {
            return 1;
        }
        let u = F::of(rng.gen::<f64>());
        // pmf(m+1)/pmf(m) = λ e^{-λ} (1+1/m)^{m-1}
        let a = lambda * (-lambda).exp();
        let ratio = move |m: u64| {
            let mf = F::of(m as f64);
            a * ((mf - F::one()) * (F::one() / mf).ln_1p()).exp()
        };
        self.table.sample(u, ratio)
    }
}

/// Truncated size-biased law of component sizes between forward-maximal
/// edges, for λ > 1. Equals the size-biased Borel-Tanner law at the dual
/// parameter.
#[derive(Debug, Clone)]
pub struct TruncatedSizeBiasedLaw<F> {
    lambda: F,
    prefactor: F, // θ(λ)/θ'(λ)
    table: SizeTable<F>,
}

impl<F: Scalar> TruncatedSizeBiasedLaw<F> {
    pub fn new(gw: &GwNumerics<F>, lambda: F) -> Result<Self> {
        if !lambda.is_finite() || lambda <= F::one() {
            return domain_err(format!(
                "TruncatedSizeBiasedLaw: lambda = {lambda} outside (1, ∞)"
            ));
        }
        let th = gw.theta_unchecked(lambda);
        let thp = gw.theta_prime(lambda)?;
        let prefactor = th / thp;
        Ok(Self {
            lambda,
            prefactor,
            table: SizeTable::new(prefactor * (-lambda).exp()),
        })
    }

    pub fn lambda(&self) -> F {
        self.lambda
    }

    pub fn pmf(&self, m: u64) -> F {
        debug_assert!(m >= 1);
        let mf = F::of(m as f64);
        let ln_u = if m == 1 {
            -self.lambda
        } else {
            -self.lambda * mf + (mf - F::one()) * (self.lambda * mf).ln() - ln_gamma(mf)
        };
        self.prefactor * ln_u.exp()
    }

    pub fn sample(&mut self, rng: &mut impl Rng) -> u64 {
        let u = F::of(rng.gen::<f64>());
        self.table.sample(u, Self::ratio_fn(self.lambda))
    }

    /// One-shot streaming inversion without a table; cost O(sampled value).
    pub fn sample_streaming(gw: &GwNumerics<F>, lambda: F, rng: &mut impl Rng) -> Result<u64> {
        Ok(Self::new(gw, lambda)?.stream(F::of(rng.gen::<f64>()), u64::MAX))
    }

    /// Streaming inversion stopped at `cap`; `None` means the sampled value
    /// exceeds `cap`.
    pub fn sample_capped(&self, rng: &mut impl Rng, cap: u64) -> Option<u64> {
        let r = self.stream(F::of(rng.gen::<f64>()), cap);
        (r <= cap).then_some(r)
    }

    fn stream(&self, u: F, cap: u64) -> u64 {
        let ratio = Self::ratio_fn(self.lambda);
        let mut term = self.prefactor * (-self.lambda).exp();
        let mut cum = term;
        let mut m = 1u64;
        while cum < u && m <= cap {
            term = term * ratio(m);
            let next = cum + term;
            if next == cum {
                break; // cumulative mass saturated in floating point
            }
            cum = next;
            m += 1;
        }
        m
    }

    // pmf(m+1)/pmf(m) = λ e^{-λ} (1+1/m)^m
    fn ratio_fn(lambda: F) -> impl Fn(u64) -> F + Copy {
        let a = lambda * (-lambda).exp();
        move |m: u64| {
            let mf = F::of(m as f64);
            a * (mf * (F::one() / mf).ln_1p()).exp()
        }
    }
}

/// Result of sampling a Poisson Galton-Watson tree under a size cap.
#[derive(Debug, Clone)]
pub enum PgwOutcome {
    Tree(RootedWeightedTree),
    /// The tree exceeded the cap; supercritical callers read this as
    /// "infinite".
    Overflow,
}

impl PgwOutcome {
    pub fn is_overflow(&self) -> bool {
        matches!(self, PgwOutcome::Overflow)
    }

    pub fn size(&self) -> Option<usize> {
        match self {
            PgwOutcome::Tree(t) => Some(t.len()),
            PgwOutcome::Overflow => None,
        }
    }
}

/// Breadth-first Poisson(λ) Galton-Watson tree, stopped at `size_cap`
/// vertices. Edges carry the unit weight convention for unweighted graphs.
/// To sample a supercritical tree conditioned finite, pass the dual
/// parameter.
pub fn pgw_sample(lambda: f64, size_cap: usize, rng: &mut impl Rng) -> PgwOutcome {
    debug_assert!(size_cap >= 1);
    let mut tree = RootedWeightedTree::new_root();
    if lambda == 0.0 {
        return PgwOutcome::Tree(tree);
    }
    let offspring = Poisson::new(lambda).expect("lambda > 0");
    let mut queue = std::collections::VecDeque::from([0u32]);
    while let Some(v) = queue.pop_front() {
        let k = offspring.sample(rng) as u64;
        for _ in 0..k {
            if tree.len() >= size_cap {
                return PgwOutcome::Overflow;
            }
            let c = tree.add_child(v, 1.0);
            queue.push_back(c);
        }
    }
    PgwOutcome::Tree(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::replicate_rng;
    use crate::stats::{chi2_critical, chi2_statistic, mean_se};

    type Gw = GwNumerics<f64>;

    /// Independent oracle: plain bisection of 1 - θ - e^{-λθ} on
    /// [1e-9, 1-1e-9], no Newton, no expm1 trick.
    fn theta_bisection_oracle(lambda: f64) -> f64 {
        let g = |t: f64| 1.0 - t - (-lambda * t).exp();
        let (mut lo, mut hi) = (1e-9, 1.0 - 1e-9);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn theta_critical_and_below_is_zero() {
        let gw = Gw::new();
        assert_eq!(gw.theta(1.0).unwrap(), 0.0);
        assert_eq!(gw.theta(0.3).unwrap(), 0.0);
        assert_eq!(gw.theta(0.0).unwrap(), 0.0);
    }

    #[test]
    fn theta_matches_bisection_oracle_at_two() {
        let gw = Gw::new();
        let got = gw.theta(2.0).unwrap();
        assert!((got - theta_bisection_oracle(2.0)).abs() < 1e-10);
        assert!((got - 0.796_812_130_0).abs() < 1e-9);
    }

    #[test]
    fn theta_near_critical_has_slope_two() {
        let gw = Gw::new();
        let got = gw.theta(1.0002).unwrap();
        let oracle = theta_bisection_oracle(1.0002);
        assert!((got - oracle).abs() / oracle < 1e-6);
        assert!((got - 4.0e-4).abs() / 4.0e-4 < 0.05, "theta = {got}");
    }

    #[test]
    fn theta_rejects_bad_input() {
        let gw = Gw::new();
        assert!(gw.theta(f64::NAN).is_err());
        assert!(gw.theta(f64::INFINITY).is_err());
        assert!(gw.theta(-0.5).is_err());
    }

    #[test]
    fn fixed_point_residual_small_on_grid() {
        let gw = Gw::new();
        for i in 0..=200 {
            let lambda = 1.0001 + (40.0 - 1.0001) * f64::from(i) / 200.0;
            let th = gw.theta(lambda).unwrap();
            let resid = (1.0 - th - (-lambda * th).exp()).abs();
            assert!(resid <= 1e-12, "residual {resid} at lambda {lambda}");
        }
    }

    #[test]
    fn theta_strictly_increasing() {
        let gw = Gw::new();
        let mut prev = 0.0;
        for i in 1..=100 {
            let lambda = 1.0 + 39.0 * f64::from(i) / 100.0;
            let th = gw.theta(lambda).unwrap();
            assert!(th > prev, "theta not increasing at {lambda}");
            prev = th;
        }
    }

    #[test]
    fn theta_prime_matches_central_differences() {
        let gw = Gw::new();
        for &lambda in &[1.01, 1.1, 1.5, 2.0, 3.0, 5.0, 10.0] {
            let h = 1e-6 * lambda.max(1.0);
            let fd = (gw.theta(lambda + h).unwrap() - gw.theta(lambda - h).unwrap()) / (2.0 * h);
            let got = gw.theta_prime(lambda).unwrap();
            assert!(
                (got - fd).abs() / fd <= 1e-5,
                "lambda {lambda}: implicit {got} vs fd {fd}"
            );
        }
    }

    #[test]
    fn theta_prime_two_matches_tight_difference() {
        let gw = Gw::new();
        let h = 1e-6;
        let fd = (gw.theta(2.0 + h).unwrap() - gw.theta(2.0 - h).unwrap()) / (2.0 * h);
        let got = gw.theta_prime(2.0).unwrap();
        assert!((got - fd).abs() / fd <= 1e-6);
    }

    #[test]
    fn theta_prime_near_one_approaches_two() {
        let gw = Gw::new();
        let got = gw.theta_prime(1.001).unwrap();
        assert!((got - 2.0).abs() <= 0.01, "theta'(1.001) = {got}");
    }

    #[test]
    fn theta_prime_rejects_subcritical() {
        let gw = Gw::new();
        assert!(gw.theta_prime(1.0).is_err());
        assert!(gw.theta_prime(0.7).is_err());
    }

    #[test]
    fn dual_fixed_point_and_oracle() {
        let gw = Gw::new();
        assert_eq!(gw.dual(1.0).unwrap(), 1.0);

        // bisection oracle for x e^{-x} = 2 e^{-2} on (0, 1)
        let target = 2.0 * (-2.0f64).exp();
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if mid * (-mid).exp() < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        let got = gw.dual(2.0).unwrap();
        assert!((got - oracle).abs() < 1e-10);
        assert!((got - 0.406_375_740_0).abs() < 1e-8);

        // cross-check the survival identity c* = c(1-θ(c))
        let th2 = gw.theta(2.0).unwrap();
        assert!((got - 2.0 * (1.0 - th2)).abs() <= 1e-10);
    }

    #[test]
    fn dual_satisfies_defining_equation_at_three() {
        let gw = Gw::new();
        let c = 3.0;
        let d = gw.dual(c).unwrap();
        assert!((d * (-d).exp() - c * (-c).exp()).abs() < 1e-12);
    }

    #[test]
    fn dual_is_involutive_and_decreasing() {
        let gw = Gw::new();
        let mut prev = gw.dual(1.0 + 1e-6).unwrap();
        for i in 1..=80 {
            let c = 1.0 + 39.0 * f64::from(i) / 80.0;
            let d = gw.dual(c).unwrap();
            assert!(d < prev, "dual not decreasing at {c}");
            prev = d;
            let back = gw.dual(d).unwrap();
            assert!((back - c).abs() < 1e-8 * c, "involution broke at {c}");
            assert!((d * (-d).exp() - c * (-c).exp()).abs() < 1e-12);
        }
        assert!(gw.dual(0.0).is_err());
        assert!(gw.dual(f64::NAN).is_err());
    }

    #[test]
    fn unit_root_of_derivative() {
        let gw = Gw::new();
        let x1 = gw.theta_prime_unit_root();
        assert!((gw.theta_prime(x1).unwrap() - 1.0).abs() <= 1e-8);
        assert!(x1 > 1.0 && x1 < 3.0);
        // coarse scan oracle: θ'-1 changes sign in (1.2, 1.5)
        assert!(gw.theta_prime(1.2).unwrap() > 1.0);
        assert!(gw.theta_prime(1.5).unwrap() < 1.0);
        assert_eq!(x1, gw.theta_prime_unit_root());
    }

    #[test]
    fn theta_inv_matches_bisection() {
        let gw = Gw::new();
        for &u in &[0.0, 1e-6, 0.1, 0.5, 0.79681213, 0.999] {
            let lam = gw.theta_inv(u).unwrap();
            if u == 0.0 {
                assert_eq!(lam, 1.0);
                continue;
            }
            // bisection on the monotone theta
            let (mut lo, mut hi) = (1.0, 40.0);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if gw.theta(mid).unwrap() < u {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            assert!((lam - 0.5 * (lo + hi)).abs() < 1e-9 * lam);
            assert!((gw.theta(lam).unwrap() - u).abs() < 1e-12);
        }
        assert!(gw.theta_inv(1.0).is_err());
        assert!(gw.theta_inv(-0.1).is_err());
    }

    #[test]
    fn with_params_validates_t_max() {
        assert!(Gw::with_params(1e-12, 40.0).is_ok());
        assert!(Gw::with_params(1e-12, 5.0).is_err()); // defect too large
        assert!(Gw::with_params(0.0, 40.0).is_err());
        let gw = Gw::new();
        assert!(1.0 - gw.theta(gw.t_max()).unwrap() < 1e-15);
    }

    #[test]
    fn borel_tanner_closed_forms() {
        let p1 = borel_tanner_pmf(0.5f64, 1).unwrap();
        assert!((p1 - (-0.5f64).exp()).abs() < 1e-15);
        // direct enumeration: P(root has 1 child) * P(child has none)
        let p2 = borel_tanner_pmf(0.5f64, 2).unwrap();
        let want = 0.5 * (-0.5f64).exp() * (-0.5f64).exp();
        assert!((p2 - want).abs() < 1e-15);
    }

    #[test]
    fn borel_tanner_sums_to_one() {
        let mut total = 0.0f64;
        for m in 1..=400u64 {
            total += borel_tanner_pmf(0.5f64, m).unwrap();
        }
        assert!((total - 1.0).abs() <= 1e-10, "sum = {total}");
    }

    #[test]
    fn borel_tanner_rejects_out_of_domain() {
        assert!(borel_tanner_pmf(0.0f64, 1).is_err());
        assert!(borel_tanner_pmf(1.2f64, 1).is_err());
        assert!(borel_tanner_pmf(0.5f64, 0).is_err());
    }

    #[test]
    fn borel_tanner_partial_sums_below_one() {
        for &lambda in &[0.2f64, 0.8, 1.0] {
            let mut total = 0.0;
            for m in 1..=2000u64 {
                let p = borel_tanner_pmf(lambda, m).unwrap();
                assert!(p >= 0.0);
                total += p;
                assert!(total <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn borel_tanner_sampler_moments() {
        let mut law = BorelTannerLaw::new(0.5f64).unwrap();
        let mut rng = replicate_rng(0xB0BE, 0);
        let n = 100_000usize;
        let xs: Vec<f64> = (0..n).map(|_| law.sample(&mut rng) as f64).collect();
        let (mean, se) = mean_se(&xs);
        assert!(
            (mean - 2.0).abs() <= 3.0 * se,
            "mean {mean} vs 2.0 (se {se})"
        );
        let sq: Vec<f64> = xs.iter().map(|&x| x * x).collect();
        let (m2, se2) = mean_se(&sq);
        assert!((m2 - 8.0).abs() <= 3.0 * se2, "m2 {m2} vs 8.0 (se {se2})");
    }

    #[test]
    fn borel_tanner_sampler_degenerate_and_deterministic() {
        let mut law = BorelTannerLaw::new(0.0f64).unwrap();
        let mut rng = replicate_rng(1, 1);
        for _ in 0..64 {
            assert_eq!(law.sample(&mut rng), 1);
        }
        assert!(BorelTannerLaw::new(1.0f64).is_err());

        let mut a = BorelTannerLaw::new(0.7f64).unwrap();
        let mut b = BorelTannerLaw::new(0.7f64).unwrap();
        let mut ra = replicate_rng(7, 0);
        let mut rb = replicate_rng(7, 0);
        let sa: Vec<u64> = (0..256).map(|_| a.sample(&mut ra)).collect();
        let sb: Vec<u64> = (0..256).map(|_| b.sample(&mut rb)).collect();
        assert_eq!(sa, sb);
    }

    #[test]
    fn size_biased_law_normalizes() {
        let gw = Gw::new();
        for &lambda in &[1.5f64, 3.0] {
            let law = TruncatedSizeBiasedLaw::new(&gw, lambda).unwrap();
            let mut total = 0.0;
            let mut m = 1u64;
            let mut last = f64::INFINITY;
            while last > 1e-14 && m < 2_000_000 {
                last = law.pmf(m);
                total += last;
                m += 1;
            }
            assert!((total - 1.0).abs() <= 1e-8, "lambda {lambda}: sum {total}");
        }
    }

    #[test]
    fn size_biased_two_algebraic_forms_agree() {
        let gw = Gw::new();
        let lambda = 2.0f64;
        let m = 7u64;
        let direct = truncated_size_biased_pmf(&gw, lambda, m).unwrap();
        let dual = gw.dual(lambda).unwrap();
        let th = gw.theta(lambda).unwrap();
        let thp = gw.theta_prime(lambda).unwrap();
        let c = th * dual / (lambda * thp);
        let via_dual = c * m as f64 * borel_tanner_pmf(dual, m).unwrap();
        assert!(
            (direct - via_dual).abs() <= 1e-12,
            "{direct} vs {via_dual}"
        );
    }

    #[test]
    fn size_biased_forms_agree_pointwise() {
        let gw = Gw::new();
        for &lambda in &[1.2f64, 1.5, 2.5, 4.0] {
            let dual = gw.dual(lambda).unwrap();
            let th = gw.theta(lambda).unwrap();
            let thp = gw.theta_prime(lambda).unwrap();
            let c = th * dual / (lambda * thp);
            for m in [1u64, 2, 3, 10, 50] {
                let a = truncated_size_biased_pmf(&gw, lambda, m).unwrap();
                let b = c * m as f64 * borel_tanner_pmf(dual, m).unwrap();
                assert!((a - b).abs() <= 1e-10, "lambda {lambda} m {m}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn size_biased_upper_tail_bound() {
        // P(B_y >= C/(y-1)^2) <= 20 e^{-C/8} at y = 1.05, C = 16.
        let gw = Gw::new();
        let y = 1.05f64;
        let c = 16.0f64;
        let law = TruncatedSizeBiasedLaw::new(&gw, y).unwrap();
        let cut = (c / ((y - 1.0) * (y - 1.0))).ceil() as u64;
        let mut head = 0.0;
        for m in 1..cut {
            head += law.pmf(m);
        }
        let tail = 1.0 - head;
        assert!(tail <= 20.0 * (-c / 8.0f64).exp(), "tail = {tail}");
    }

    #[test]
    fn size_biased_sampler_consistency() {
        let gw = Gw::new();
        let mut law = TruncatedSizeBiasedLaw::new(&gw, 2.0).unwrap();
        let mut rng = replicate_rng(0x5eed, 3);
        let n = 100_000usize;
        let ones: Vec<f64> = (0..n)
            .map(|_| f64::from(u8::from(law.sample(&mut rng) == 1)))
            .collect();
        let (freq, se) = mean_se(&ones);
        let want = law.pmf(1);
        assert!(
            (freq - want).abs() <= 3.0 * se,
            "P(B=1): {freq} vs {want} (se {se})"
        );
    }

    #[test]
    fn size_biased_lower_tail_bound_near_one() {
        // P(B <= 0.01/(λ-1)^2) <= 8 sqrt(0.01) + 3 SE at λ = 1.1.
        let gw = Gw::new();
        let lambda = 1.1f64;
        let mut law = TruncatedSizeBiasedLaw::new(&gw, lambda).unwrap();
        let mut rng = replicate_rng(0x5eed, 4);
        let cut = (0.01 / ((lambda - 1.0) * (lambda - 1.0))).floor() as u64;
        let n = 100_000usize;
        let hits: Vec<f64> = (0..n)
            .map(|_| f64::from(u8::from(law.sample(&mut rng) <= cut)))
            .collect();
        let (freq, se) = mean_se(&hits);
        assert!(freq <= 8.0 * 0.01f64.sqrt() + 3.0 * se, "freq = {freq}");
    }

    #[test]
    fn size_biased_sampler_deterministic_and_streaming_agrees() {
        let gw = Gw::new();
        let mut a = TruncatedSizeBiasedLaw::new(&gw, 1.4).unwrap();
        let mut b = TruncatedSizeBiasedLaw::new(&gw, 1.4).unwrap();
        let mut ra = replicate_rng(11, 0);
        let mut rb = replicate_rng(11, 0);
        let sa: Vec<u64> = (0..512).map(|_| a.sample(&mut ra)).collect();
        let sb: Vec<u64> = (0..512).map(|_| b.sample(&mut rb)).collect();
        assert_eq!(sa, sb);

        // table inversion and streaming inversion share the same cdf walk
        let mut rc = replicate_rng(11, 0);
        let sc: Vec<u64> = (0..512)
            .map(|_| TruncatedSizeBiasedLaw::sample_streaming(&gw, 1.4, &mut rc).unwrap())
            .collect();
        assert_eq!(sa, sc);

        assert!(TruncatedSizeBiasedLaw::new(&gw, 1.0).is_err());
        assert!(truncated_size_biased_pmf(&gw, 0.9, 3).is_err());
    }

    #[test]
    fn pgw_zero_rate_is_single_root() {
        let mut rng = replicate_rng(2, 2);
        for _ in 0..32 {
            match pgw_sample(0.0, 10, &mut rng) {
                PgwOutcome::Tree(t) => assert_eq!(t.len(), 1),
                PgwOutcome::Overflow => panic!("overflow impossible at lambda 0"),
            }
        }
    }

    #[test]
    fn pgw_size_distribution_matches_borel_tanner() {
        let mut rng = replicate_rng(0xACCE, 0);
        let n = 100_000usize;
        let mut counts = [0f64; 16]; // sizes 1..=15 plus tail bucket
        for _ in 0..n {
            match pgw_sample(0.5, 1_000_000, &mut rng) {
                PgwOutcome::Tree(t) => {
                    let s = t.len().min(15);
                    counts[s - 1] += 1.0;
                }
                PgwOutcome::Overflow => panic!("subcritical overflow"),
            }
        }
        let mut expected = [0f64; 16];
        let mut head = 0.0;
        for m in 1..=15u64 {
            let p = borel_tanner_pmf(0.5f64, m).unwrap();
            expected[(m - 1) as usize] = p * n as f64;
            head += p;
        }
        expected[15] = (1.0 - head) * n as f64;
        counts[15] = n as f64 - counts[..15].iter().sum::<f64>();
        let stat = chi2_statistic(&counts, &expected);
        let crit = chi2_critical(15, 0.01);
        assert!(stat < crit, "chi2 {stat} >= {crit}");
    }
}
