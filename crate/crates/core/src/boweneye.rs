//! A sojourn-time model of the Bowen eye: an orbit alternating between
//! neighborhoods of two saddles `A` and `B`, spending in each a time
//! proportional to its log-distance on entry, which is multiplied by a
//! fixed ratio at every passage.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Accumulators are rescaled once the total time exceeds this.
const RESCALE_ABOVE: f64 = 1e300;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaddleParams {
    pub alpha_minus: f64,
    pub alpha_plus: f64,
    pub beta_minus: f64,
    pub beta_plus: f64,
    /// Log-distance at the first entry.
    #[serde(default = "default_entry")]
    pub s1: f64,
    /// Number of passes.
    pub passes: usize,
    /// Time spent between the two saddle neighborhoods on each pass.
    #[serde(default)]
    pub t_glob: f64,
}

fn default_entry() -> f64 {
    1.0
}

impl SaddleParams {
    /// `(alpha_-, alpha_+, beta_-, beta_+)` with `s1 = 1`, no transition
    /// time.
    pub fn new(alpha: (f64, f64), beta: (f64, f64), passes: usize) -> Result<Self> {
        let p = SaddleParams {
            alpha_minus: alpha.0,
            alpha_plus: alpha.1,
            beta_minus: beta.0,
            beta_plus: beta.1,
            s1: 1.0,
            passes,
            t_glob: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.alpha_minus, self.alpha_plus, self.beta_minus, self.beta_plus, self.s1, self.t_glob]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::config("saddle parameters must be finite"));
        }
        if !(self.alpha_minus < 0.0 && self.alpha_plus > 0.0 && self.beta_minus < 0.0 && self.beta_plus > 0.0) {
            return Err(Error::config("eigenvalues must satisfy alpha- < 0 < alpha+ and beta- < 0 < beta+"));
        }
        if !(self.s1 > 0.0) {
            return Err(Error::config("entry log-distance s1 must be positive"));
        }
        if self.t_glob < 0.0 {
            return Err(Error::config("transition time must be nonnegative"));
        }
        if self.passes < 4 {
            return Err(Error::config("at least 4 passes are required"));
        }
        Ok(())
    }

    /// Ratio applied to the entry log-distance after a pass at `saddle`.
    pub fn ratio_after(&self, saddle: Saddle) -> f64 {
        match saddle {
            Saddle::A => self.alpha_minus.abs() / self.beta_plus,
            Saddle::B => self.beta_minus.abs() / self.alpha_plus,
        }
    }

    fn sojourn_rate(&self, saddle: Saddle) -> f64 {
        match saddle {
            Saddle::A => self.beta_plus,
            Saddle::B => self.alpha_plus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Saddle {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Pass {
    /// 1-based; odd passes are at `A`.
    pub k: usize,
    pub saddle: Saddle,
    /// Entry log-distance `s_k`; infinite once it leaves the double range.
    pub entry: f64,
    /// Sojourn time `tau_k`; infinite once it leaves the double range.
    pub sojourn: f64,
    pub log_entry: f64,
    pub log_sojourn: f64,
    pub log_time_near_a: f64,
    pub log_total_time: f64,
    pub fraction_near_a: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SojournTrace {
    pub params: SaddleParams,
    pub passes: Vec<Pass>,
}

impl SojournTrace {
    /// `pass,saddle,s,tau,fraction_a` rows (`s` and `tau` as logarithms
    /// once they leave the double range).
    pub fn csv(&self) -> String {
        let mut out = String::from("pass,saddle,log_s,log_tau,fraction_a\n");
        for p in &self.passes {
            out.push_str(&format!(
                "{},{:?},{},{},{}\n",
                p.k, p.saddle, p.log_entry, p.log_sojourn, p.fraction_near_a
            ));
        }
        out
    }

    pub fn fractions(&self) -> impl Iterator<Item = f64> + '_ {
        self.passes.iter().map(|p| p.fraction_near_a)
    }
}

/// Runs the passage law for `params.passes` passes.
///
/// All accumulators share a common scale `e^scale`; when the total time
/// passes `1e300` everything is divided by it, so fractions stay exact
/// ratios and logarithms stay finite.
pub fn simulate(params: &SaddleParams) -> Result<SojournTrace> {
    params.validate()?;
    let mut scale = 0.0f64;
    let mut s = params.s1;
    let (mut near_a, mut total) = (0.0f64, 0.0f64);
    let mut passes = Vec::with_capacity(params.passes);
    for k in 1..=params.passes {
        let saddle = if k % 2 == 1 { Saddle::A } else { Saddle::B };
        let tau = s / params.sojourn_rate(saddle);
        if saddle == Saddle::A {
            near_a += tau;
        }
        total += tau + params.t_glob * (-scale).exp();
        let unscale = |v: f64| if scale == 0.0 { v } else { (v.ln() + scale).exp() };
        passes.push(Pass {
            k,
            saddle,
            entry: unscale(s),
            sojourn: unscale(tau),
            log_entry: s.ln() + scale,
            log_sojourn: tau.ln() + scale,
            log_time_near_a: near_a.ln() + scale,
            log_total_time: total.ln() + scale,
            fraction_near_a: near_a / total,
        });
        s *= params.ratio_after(saddle);
        if total > RESCALE_ABOVE || s > RESCALE_ABOVE {
            let factor = total.max(s);
            scale += factor.ln();
            s /= factor;
            near_a /= factor;
            total /= factor;
        }
    }
    Ok(SojournTrace { params: *params, passes })
}

/// `(limsup, liminf)` of the fraction of time near `A`, as extrema over
/// passes `ceil(K/2)..=K`.
pub fn fraction_limit_points(params: &SaddleParams) -> Result<(f64, f64)> {
    if params.passes < 40 {
        return Err(Error::config("limit points need at least 40 passes"));
    }
    let trace = simulate(params)?;
    let start = params.passes.div_ceil(2);
    Ok(trace.passes[start - 1..].iter().fold((f64::NEG_INFINITY, f64::INFINITY), |(hi, lo), p| {
        (hi.max(p.fraction_near_a), lo.min(p.fraction_near_a))
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EtaMeasure {
    pub c_a: f64,
    pub c_b: f64,
    pub mass: f64,
}

/// `c_A = |alpha-| / (|alpha-| + beta+)`, `c_B = |beta-| / (|beta-| + alpha+)`.
pub fn eta_measure(params: &SaddleParams) -> EtaMeasure {
    let c_a = params.alpha_minus.abs() / (params.alpha_minus.abs() + params.beta_plus);
    let c_b = params.beta_minus.abs() / (params.beta_minus.abs() + params.alpha_plus);
    EtaMeasure { c_a, c_b, mass: c_a + c_b }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TakensCondition {
    /// `|alpha-| |beta-| / (alpha+ beta+)`, the product of the two ratios.
    pub rho: f64,
    /// `rho > 1`: time averages diverge.
    pub diverges: bool,
    /// The product `c_A c_B`; always below 1.
    pub eta_product: f64,
    pub eta_sum: f64,
    /// `1 < c_A + c_B < 2`, evaluated only when `rho > 1`.
    pub eta_sum_in_range: Option<bool>,
}

pub fn takens_condition(params: &SaddleParams) -> TakensCondition {
    let rho = (params.alpha_minus.abs() * params.beta_minus.abs()) / (params.alpha_plus * params.beta_plus);
    let eta = eta_measure(params);
    let diverges = rho > 1.0;
    TakensCondition {
        rho,
        diverges,
        eta_product: eta.c_a * eta.c_b,
        eta_sum: eta.mass,
        eta_sum_in_range: diverges.then(|| eta.mass > 1.0 && eta.mass < 2.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(a: f64, b: f64, k: usize) -> SaddleParams {
        SaddleParams::new((a, b), (a, b), k).unwrap()
    }

    #[test]
    fn four_passes_by_hand() {
        let t = simulate(&sym(-2.0, 1.0, 4)).unwrap();
        let s: Vec<f64> = t.passes.iter().map(|p| p.entry).collect();
        assert_eq!(s, vec![1.0, 2.0, 4.0, 8.0]);
        let tau: Vec<f64> = t.passes.iter().map(|p| p.sojourn).collect();
        assert_eq!(tau, vec![1.0, 2.0, 4.0, 8.0]);
        assert_eq!(t.passes[3].fraction_near_a, 1.0 / 3.0);
        let t5 = simulate(&sym(-2.0, 1.0, 5)).unwrap();
        assert_eq!(t5.passes[4].fraction_near_a, 21.0 / 31.0);
    }

    /// Geometric-series oracle: after pass `k` with all ratios `r` and
    /// rates 1, time near A is the sum of `r^(j-1)` over odd `j <= k`.
    fn fraction_oracle(r: f64, k: usize) -> f64 {
        let near: f64 = (1..=k).filter(|j| j % 2 == 1).map(|j| r.powi(j as i32 - 1)).sum();
        let total: f64 = (1..=k).map(|j| r.powi(j as i32 - 1)).sum();
        near / total
    }

    #[test]
    fn symmetric_limit_points() {
        let (hi, lo) = fraction_limit_points(&sym(-2.0, 1.0, 200)).unwrap();
        assert!((hi - 2.0 / 3.0).abs() < 1e-3 && (lo - 1.0 / 3.0).abs() < 1e-3);
        let (hi3, lo3) = fraction_limit_points(&sym(-3.0, 1.0, 400)).unwrap();
        let oracle: Vec<f64> = (200..=400).map(|k| fraction_oracle(3.0, k)).collect();
        let ohi = oracle.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let olo = oracle.iter().copied().fold(f64::INFINITY, f64::min);
        assert!((hi3 - ohi).abs() < 1e-6 && (lo3 - olo).abs() < 1e-6);
    }

    #[test]
    fn contracting_case_converges() {
        let p = SaddleParams::new((-1.0, 2.0), (-1.0, 2.0), 200).unwrap();
        let (hi, lo) = fraction_limit_points(&p).unwrap();
        assert!(hi - lo < 1e-3);
        assert!(!takens_condition(&p).diverges);
    }

    #[test]
    fn long_runs_rescale() {
        let t = simulate(&sym(-3.0, 1.0, 5000)).unwrap();
        let last = t.passes.last().unwrap();
        assert!(last.log_total_time.is_finite() && last.log_total_time > 690.0);
        assert!(t.passes.windows(2).all(|w| w[1].log_total_time >= w[0].log_total_time));
        assert!((t.passes[4999].log_entry - 4999.0 * 3f64.ln()).abs() < 1e-9 * 4999.0 * 3f64.ln());
    }

    #[test]
    fn takens_and_eta() {
        let t = takens_condition(&sym(-2.0, 1.0, 10));
        assert_eq!(t.rho, 4.0);
        assert!(t.diverges);
        assert_eq!(t.eta_sum_in_range, Some(true));
        assert!((t.eta_sum - 4.0 / 3.0).abs() < 1e-15);
        assert!(!takens_condition(&sym(-1.0, 1.0, 10)).diverges);
        let e = eta_measure(&sym(-3.0, 1.0, 10));
        assert_eq!((e.c_a, e.c_b, e.mass), (0.75, 0.75, 1.5));
        let e = eta_measure(&sym(-1.0, 1.0, 10));
        assert_eq!((e.c_a, e.c_b, e.mass), (0.5, 0.5, 1.0));
    }

    #[test]
    fn parameter_checks() {
        assert!(SaddleParams::new((1.0, 1.0), (-1.0, 1.0), 10).is_err());
        assert!(SaddleParams::new((-1.0, 1.0), (-1.0, 1.0), 3).is_err());
        assert!(fraction_limit_points(&sym(-2.0, 1.0, 20)).is_err());
    }
}
