use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The sub-logarithmic part β̄_k(n) of the parametrisation. Only the forms
/// consumed by the μ̄_k case analysis are representable: a constant, a
/// multiple of log log n, or identically zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", content = "scale", rename_all = "snake_case")]
pub enum BetaSpec {
    Zero,
    Constant(f64),
    ScaledLogLog(f64),
}

impl BetaSpec {
    pub fn eval(&self, n: u64) -> Result<f64> {
        match self {
            BetaSpec::Zero => Ok(0.0),
            BetaSpec::Constant(c) => Ok(*c),
            BetaSpec::ScaledLogLog(c) => {
                if n < 3 {
                    return Err(Error::InvalidAtThisN(
                        "log log n requires n ≥ 3".into(),
                    ));
                }
                Ok(c * (n as f64).ln().ln())
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, BetaSpec::Zero)
            || matches!(self, BetaSpec::Constant(c) | BetaSpec::ScaledLogLog(c) if *c == 0.0)
    }

    /// Bounded as n → ∞.
    fn is_bounded(&self) -> bool {
        !matches!(self, BetaSpec::ScaledLogLog(c) if *c != 0.0)
    }

    fn scaled(&self, factor: f64) -> BetaSpec {
        match self {
            BetaSpec::Zero => BetaSpec::Zero,
            BetaSpec::Constant(c) => BetaSpec::Constant(c * factor),
            BetaSpec::ScaledLogLog(c) => BetaSpec::ScaledLogLog(c * factor),
        }
    }
}

/// Per-dimension parameters (ᾱ_k, β̄_k, γ̄_k) of a direction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KParams {
    pub alpha: Rational64,
    pub gamma: Rational64,
    pub beta: BetaSpec,
}

impl KParams {
    pub fn zero() -> Self {
        Self {
            alpha: Rational64::zero(),
            gamma: Rational64::zero(),
            beta: BetaSpec::Zero,
        }
    }

    /// p̄_k ≡ 0.
    pub fn is_zero_direction(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero()
    }
}

/// A j-admissible direction p̄ given through the parametrisation
/// p̄_k = (ᾱ_k log n + β̄_k(n)) (k−j)! / n^{k−j+γ̄_k}.
///
/// Entries are indexed k = 1..=d; dimensions below j must be identically
/// zero (the parametrisation is only meaningful for k ≥ j).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DirectionParams {
    pub d: usize,
    pub j: usize,
    pub per_k: Vec<KParams>,
}

impl DirectionParams {
    pub fn new(d: usize, j: usize, per_k: Vec<KParams>) -> Result<Self> {
        let dp = Self { d, j, per_k };
        dp.validate()?;
        Ok(dp)
    }

    pub fn k_params(&self, k: usize) -> &KParams {
        &self.per_k[k - 1]
    }

    pub fn is_zero_k(&self, k: usize) -> bool {
        self.k_params(k).is_zero_direction()
    }

    /// Admissibility checks (A1)–(A4) plus the k < j restriction.
    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::InvalidInput("d must be at least 2".into()));
        }
        if self.j < 1 || self.j > self.d - 1 {
            return Err(Error::InvalidInput(format!(
                "j must lie in [1, d−1], got j={}, d={}",
                self.j, self.d
            )));
        }
        if self.per_k.len() != self.d {
            return Err(Error::InvalidInput(format!(
                "expected {} per-k entries, got {}",
                self.d,
                self.per_k.len()
            )));
        }
        for k in 1..=self.d {
            let kp = self.k_params(k);
            if k < self.j && !kp.is_zero_direction() {
                return Err(Error::InvalidInput(format!(
                    "p̄_{k} must be identically zero below the target degree j={}",
                    self.j
                )));
            }
            // (A1): at least one of ᾱ_k, γ̄_k is zero, neither negative
            if kp.alpha.is_negative() || kp.gamma.is_negative() {
                return Err(Error::InvalidInput(format!(
                    "negative alpha or gamma at k={k}"
                )));
            }
            if !kp.alpha.is_zero() && !kp.gamma.is_zero() {
                return Err(Error::InvalidInput(format!(
                    "(A1) violated at k={k}: alpha and gamma both non-zero"
                )));
            }
            // (A2): alpha = 0 forces beta to be zero or positive
            if kp.alpha.is_zero() && !kp.beta.is_zero() {
                let positive = match kp.beta {
                    BetaSpec::Zero => true,
                    BetaSpec::Constant(c) | BetaSpec::ScaledLogLog(c) => c > 0.0,
                };
                if !positive {
                    return Err(Error::InvalidInput(format!(
                        "(A2) violated at k={k}: alpha = 0 needs positive beta"
                    )));
                }
            }
            // (A3) |β̄_k| = o(log n) holds for every representable form
        }
        // (A4): some k0 in [j+1, d] with alpha > 0
        if !(self.j + 1..=self.d).any(|k| self.k_params(k).alpha > Rational64::zero()) {
            return Err(Error::InvalidInput(
                "(A4) violated: no k in [j+1, d] with positive alpha".into(),
            ));
        }
        Ok(())
    }
}

/// The direction evaluated at a concrete n: clamped entries min{p̄_k, 1}
/// alongside the raw values.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProbabilityVector {
    pub n: u64,
    /// p_k clamped into [0, 1], indexed k = 1..=d.
    pub p: Vec<f64>,
    /// unclamped p̄_k.
    pub raw: Vec<f64>,
}

impl ProbabilityVector {
    pub fn get(&self, k: usize) -> f64 {
        self.p[k - 1]
    }

    pub fn raw_get(&self, k: usize) -> f64 {
        self.raw[k - 1]
    }

    pub fn d(&self) -> usize {
        self.p.len()
    }

    /// The vector scaled to time τ, entries min{τ p̄_k, 1}.
    pub fn at_tau(&self, tau: f64) -> ProbabilityVector {
        ProbabilityVector {
            n: self.n,
            p: self.raw.iter().map(|r| (tau * r).clamp(0.0, 1.0)).collect(),
            raw: self.raw.iter().map(|r| tau * r).collect(),
        }
    }
}

/// Evaluates p̄ at τ = 1 for the given n.
pub fn evaluate_pbar(dp: &DirectionParams, n: u64) -> Result<ProbabilityVector> {
    dp.validate()?;
    if n < (dp.d + 2) as u64 {
        return Err(Error::InvalidInput(format!(
            "need n ≥ d+2 = {}, got {n}",
            dp.d + 2
        )));
    }
    let ln_n = (n as f64).ln();
    let mut raw = Vec::with_capacity(dp.d);
    for k in 1..=dp.d {
        let kp = dp.k_params(k);
        if kp.is_zero_direction() || k < dp.j {
            raw.push(0.0);
            continue;
        }
        let alpha = rat_f64(kp.alpha);
        let beta = kp.beta.eval(n)?;
        let numer = alpha * ln_n + beta;
        if numer < 0.0 {
            return Err(Error::InvalidAtThisN(format!(
                "p̄_{k} is negative at n={n} (beta too negative)"
            )));
        }
        let exponent = (k - dp.j) as f64 + rat_f64(kp.gamma);
        let value = numer * factorial((k - dp.j) as u64) / (n as f64).powf(exponent);
        raw.push(value);
    }
    Ok(ProbabilityVector {
        n,
        p: raw.iter().map(|r| r.clamp(0.0, 1.0)).collect(),
        raw,
    })
}

pub fn rat_f64(r: Rational64) -> f64 {
    r.to_f64().expect("rational fits f64")
}

pub fn factorial(m: u64) -> f64 {
    (1..=m).map(|x| x as f64).product()
}

pub fn ln_factorial(m: u64) -> f64 {
    (1..=m).map(|x| (x as f64).ln()).sum()
}

/// ln binom(n, m) for small m, computed exactly as a product.
pub fn ln_binom(n: u64, m: u64) -> f64 {
    if m > n {
        return f64::NEG_INFINITY;
    }
    (0..m).map(|i| ((n - i) as f64).ln()).sum::<f64>() - ln_factorial(m)
}

/// binom(n, m) as f64; exact for the small m used here.
pub fn binom(n: u64, m: u64) -> f64 {
    if m > n {
        return 0.0;
    }
    let mut acc = 1.0f64;
    for i in 0..m {
        acc = acc * ((n - i) as f64) / ((i + 1) as f64);
    }
    acc.round()
}

/// Which branch of the μ̄_k case analysis applies, at a concrete n and
/// asymptotically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MuCase {
    Saturated,
    LogLog,
    LogBeta,
}

/// Exact λ̄_k together with the finite-n values μ̄_k(n) and ν̄_k.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KReport {
    pub k: usize,
    pub lambda: Rational64,
    pub mu: f64,
    pub nu: f64,
    pub mu_case: MuCase,
    /// μ̄_k = O(1) as n → ∞, decided symbolically from the parameter forms.
    pub mu_bounded: bool,
    /// λ̄_k log n + μ̄_k + ν̄_k at this n.
    pub value: f64,
}

/// Finite-n criticality report: (λ̄, μ̄, ν̄) per k with p̄_k ≠ 0, the critical
/// set 𝒞, (C1)/(C2) flags, and the index k̄ attaining (C2) when it exists.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriticalityReport {
    pub n: u64,
    pub j: usize,
    pub d: usize,
    pub per_k: Vec<KReport>,
    pub critical_set: Vec<usize>,
    pub k_bar: Option<usize>,
    pub satisfies_c1: bool,
    pub satisfies_c2: bool,
}

/// Tolerance for (C2) at finite n, applied after normalising by log n.
pub const CRITICALITY_TOL: f64 = 1e-9;

/// Evaluates eq. (λ, μ, ν) for every k in [j, d] with p̄_k ≠ 0:
///   λ̄_k = j+1 − γ̄_k − (k−j+1) Σ_{i>j} ᾱ_i          (exact rational)
///   μ̄_k = −(k−j+1) Σ_{i>j} β̄_i/n^{γ̄_i} + case(p̄_k, ᾱ_k)
///   ν̄_k = case(k = j, ᾱ_k)
/// and the (C1)/(C2) flags at this n.
pub fn lambda_mu_nu(dp: &DirectionParams, n: u64) -> Result<CriticalityReport> {
    dp.validate()?;
    let pv = evaluate_pbar(dp, n)?;
    let ln_n = (n as f64).ln();
    let alpha_sum: Rational64 = (dp.j + 1..=dp.d).map(|i| dp.k_params(i).alpha).sum();
    // Σ_{i>j} β̄_i / n^{γ̄_i} at this n
    let beta_sum: f64 = (dp.j + 1..=dp.d)
        .map(|i| {
            let kp = dp.k_params(i);
            Ok(kp.beta.eval(n)? / (n as f64).powf(rat_f64(kp.gamma)))
        })
        .collect::<Result<Vec<f64>>>()?
        .iter()
        .sum();
    // boundedness of the shared sum term: swamped by n^γ when γ > 0
    let sum_bounded = (dp.j + 1..=dp.d).all(|i| {
        let kp = dp.k_params(i);
        !kp.gamma.is_zero() || kp.beta.is_bounded()
    });

    let mut per_k = Vec::new();
    for k in dp.j..=dp.d {
        let kp = dp.k_params(k);
        if dp.is_zero_k(k) {
            continue;
        }
        let lambda = Rational64::from_integer((dp.j + 1) as i64)
            - kp.gamma
            - Rational64::from_integer((k - dp.j + 1) as i64) * alpha_sum;
        let multiplier = (k - dp.j + 1) as f64;

        let (case, case_value) = if pv.raw_get(k) > 1.0 {
            (MuCase::Saturated, 0.0)
        } else if !kp.alpha.is_zero() {
            if n < 3 {
                return Err(Error::InvalidInput(
                    "log log n in μ̄ requires n ≥ 3".into(),
                ));
            }
            (MuCase::LogLog, ln_n.ln())
        } else {
            let b = kp.beta.eval(n)?;
            if b <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "log of non-positive β̄_{k} at n={n}"
                )));
            }
            (MuCase::LogBeta, b.ln())
        };
        let mu = -multiplier * beta_sum + case_value;

        // asymptotic case decides whether μ̄_k stays bounded
        let case_bounded = match asymptotic_case(dp, k) {
            MuCase::Saturated => true,
            MuCase::LogLog => false,
            MuCase::LogBeta => kp.beta.is_bounded(),
        };
        let mu_bounded = sum_bounded && case_bounded;

        let nu = if k == dp.j {
            -ln_factorial((dp.j + 1) as u64)
        } else if !kp.alpha.is_zero() {
            -ln_factorial(dp.j as u64) - ((k - dp.j + 1) as f64).ln() + rat_f64(kp.alpha).ln()
        } else {
            -ln_factorial(dp.j as u64) - ((k - dp.j + 1) as f64).ln()
        };

        let value = rat_f64(lambda) * ln_n + mu + nu;
        per_k.push(KReport {
            k,
            lambda,
            mu,
            nu,
            mu_case: case,
            mu_bounded,
            value,
        });
    }

    let critical_set: Vec<usize> = per_k
        .iter()
        .filter(|r| r.lambda.is_zero() && r.mu_bounded)
        .map(|r| r.k)
        .collect();
    let satisfies_c1 = per_k.iter().all(|r| r.value / ln_n <= CRITICALITY_TOL);
    let near: Vec<&KReport> = per_k
        .iter()
        .filter(|r| (r.value / ln_n).abs() <= CRITICALITY_TOL)
        .collect();
    let k_bar = near
        .iter()
        .min_by(|a, b| {
            (a.value / ln_n)
                .abs()
                .partial_cmp(&(b.value / ln_n).abs())
                .unwrap()
        })
        .map(|r| r.k);
    let satisfies_c2 = k_bar.is_some();

    Ok(CriticalityReport {
        n,
        j: dp.j,
        d: dp.d,
        per_k,
        critical_set,
        k_bar,
        satisfies_c1,
        satisfies_c2,
    })
}

/// The μ̄ branch that applies for all large n.
fn asymptotic_case(dp: &DirectionParams, k: usize) -> MuCase {
    let kp = dp.k_params(k);
    if k > dp.j {
        // p̄_k → 0 for k > j
        if !kp.alpha.is_zero() {
            MuCase::LogLog
        } else {
            MuCase::LogBeta
        }
    } else {
        // k = j: p̄_j = (ᾱ log n + β̄)/n^γ̄
        if !kp.gamma.is_zero() {
            // tends to 0 (and (A1) forces ᾱ = 0 here)
            MuCase::LogBeta
        } else if !kp.alpha.is_zero() {
            MuCase::Saturated // grows like log n
        } else {
            match kp.beta {
                BetaSpec::ScaledLogLog(c) if c > 0.0 => MuCase::Saturated,
                BetaSpec::Constant(c) if c > 1.0 => MuCase::Saturated,
                _ => MuCase::LogBeta,
            }
        }
    }
}

/// (C1) and (C2) evaluated at n, with the full report.
pub fn is_critical_direction(dp: &DirectionParams, n: u64) -> Result<(bool, CriticalityReport)> {
    let report = lambda_mu_nu(dp, n)?;
    Ok((report.satisfies_c1 && report.satisfies_c2, report))
}

/// q̄ = Π_{k=j+1}^d (1 − p̄_k)^binom(n−j−1, k−j), the probability that a
/// fixed (j+1)-set lies in no higher simplex at τ = 1. Log-space.
pub fn q_bar(pv: &ProbabilityVector, j: usize) -> f64 {
    let d = pv.d();
    let mut log_q = 0.0f64;
    for k in j + 1..=d {
        let p = pv.get(k);
        if p >= 1.0 {
            return 0.0;
        }
        if p > 0.0 {
            log_q += binom(pv.n - j as u64 - 1, (k - j) as u64) * (-p).ln_1p();
        }
    }
    log_q.exp()
}

/// N_i of the exact expectation: the number of (i+1)-sets that contain at
/// least one petal of ℱ(K, C) and are not contained in K, by
/// inclusion–exclusion over petal subsets (a union of t petals has j + t
/// vertices).
fn n_i_forbidden(n: u64, j: usize, k: usize, i: usize) -> f64 {
    let petals = (k - j + 1) as u64;
    let mut total = 0.0f64;
    let mut sign = 1.0f64;
    for t in 1..=petals {
        let union_size = j as u64 + t;
        let pick = (i + 1) as u64;
        if pick < union_size {
            break;
        }
        let free = pick - union_size;
        let ways_all = binom(n - union_size, free);
        let ways_in_k = binom((k + 1) as u64 - union_size, free);
        total += sign * binom(petals, t) * (ways_all - ways_in_k);
        sign = -sign;
    }
    total
}

/// log E(X_{j,k}) at the clamped probability vector p:
///   k > j: binom(n,k+1)·binom(k+1,j)·p_k·Π_{i>j}(1−p_i)^{N_i}
///   k = j: binom(n,j+1)·min{p_j,1}·Π_{i>j}(1−p_i)^binom(n−j−1, i−j)
pub fn log_expected_xjk(pv: &ProbabilityVector, j: usize, k: usize) -> f64 {
    let n = pv.n;
    let d = pv.d();
    let p_k = pv.get(k);
    if p_k <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let mut log_e;
    if k == j {
        log_e = ln_binom(n, (j + 1) as u64) + p_k.ln();
        for i in j + 1..=d {
            let p_i = pv.get(i);
            if p_i >= 1.0 {
                return f64::NEG_INFINITY;
            }
            if p_i > 0.0 {
                log_e += binom(n - j as u64 - 1, (i - j) as u64) * (-p_i).ln_1p();
            }
        }
    } else {
        log_e = ln_binom(n, (k + 1) as u64) + ln_binom((k + 1) as u64, j as u64) + p_k.ln();
        for i in j + 1..=d {
            let p_i = pv.get(i);
            if p_i >= 1.0 {
                return f64::NEG_INFINITY;
            }
            if p_i > 0.0 {
                log_e += n_i_forbidden(n, j, k, i) * (-p_i).ln_1p();
            }
        }
    }
    log_e
}

/// E(X_{j,k}) at finite n, exactly (up to floating point).
pub fn exact_expected_xjk(pv: &ProbabilityVector, j: usize, k: usize) -> f64 {
    log_expected_xjk(pv, j, k).exp()
}

/// Per-k limiting expectations in the critical window τ = 1 + c/log n:
/// exp(μ̄_k + ν̄_k + c(γ̄_k − j − 1)) for critical k, else 0.
pub fn critical_window_expectation(dp: &DirectionParams, n: u64, c: f64) -> Result<Vec<f64>> {
    let report = lambda_mu_nu(dp, n)?;
    let mut out = vec![0.0; dp.d + 1];
    for r in &report.per_k {
        if report.critical_set.contains(&r.k) {
            let gamma = rat_f64(dp.k_params(r.k).gamma);
            out[r.k] = (r.mu + r.nu + c * (gamma - (dp.j + 1) as f64)).exp();
        }
    }
    Ok(out)
}

/// The critical-window constant
/// ℰ = exp(−c(j+1)) Σ_{k∈𝒞} exp(μ̄_k + ν̄_k + c γ̄_k).
pub fn e_constant(dp: &DirectionParams, n: u64, c: f64) -> Result<f64> {
    let report = lambda_mu_nu(dp, n)?;
    let mut sum = 0.0f64;
    for r in &report.per_k {
        if report.critical_set.contains(&r.k) {
            let gamma = rat_f64(dp.k_params(r.k).gamma);
            sum += (r.mu + r.nu + c * gamma).exp();
        }
    }
    Ok((-c * (dp.j as f64 + 1.0)).exp() * sum)
}

/// Parameters of p = (1+ξ) p̄ to leading order: α, γ, λ, ν unchanged,
/// β_k = (1+ξ) β̄_k + ᾱ_k ξ log n, and
/// μ_k = μ̄_k − (k−j+1) ξ Σ_{i>j} ᾱ_i log n.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScaledKParams {
    pub k: usize,
    pub alpha: Rational64,
    pub gamma: Rational64,
    pub beta_value: f64,
    pub lambda: Rational64,
    pub mu: f64,
    pub nu: f64,
}

pub fn scale_parameters(dp: &DirectionParams, n: u64, xi: f64) -> Result<Vec<ScaledKParams>> {
    if xi.abs() >= 1.0 {
        return Err(Error::InvalidInput("|ξ| must be below 1".into()));
    }
    let report = lambda_mu_nu(dp, n)?;
    let ln_n = (n as f64).ln();
    let alpha_sum: f64 = (dp.j + 1..=dp.d)
        .map(|i| rat_f64(dp.k_params(i).alpha))
        .sum();
    report
        .per_k
        .iter()
        .map(|r| {
            let kp = dp.k_params(r.k);
            Ok(ScaledKParams {
                k: r.k,
                alpha: kp.alpha,
                gamma: kp.gamma,
                beta_value: (1.0 + xi) * kp.beta.eval(n)? + rat_f64(kp.alpha) * xi * ln_n,
                lambda: r.lambda,
                mu: r.mu - ((r.k - dp.j + 1) as f64) * xi * alpha_sum * ln_n,
                nu: r.nu,
            })
        })
        .collect()
}

/// One rescaling step j → j−1: primed parameters ᾱ′_k = η ᾱ_k/(k−j+1),
/// β̄′_k = η β̄_k/(k−j+1), γ̄′_k = γ̄_k, with η the exact rational making
/// max_k λ′_k = 0 (the o(1) correction ε(n) is not computed).
fn rescale_one_step(dp: &DirectionParams) -> Result<(Rational64, DirectionParams)> {
    let j = dp.j;
    if j < 2 {
        return Err(Error::InvalidInput(
            "cannot rescale below degree 1".into(),
        ));
    }
    // S = Σ_{i=j}^d ᾱ_i/(i−j+1), the coefficient sum entering every λ′_k
    let s: Rational64 = (j..=dp.d)
        .map(|i| dp.k_params(i).alpha / Rational64::from_integer((i - j + 1) as i64))
        .sum();
    if !(s > Rational64::zero()) {
        return Err(Error::Infeasible(
            "no positive η can zero the rescaled λ (vanishing alpha sum)".into(),
        ));
    }
    // λ′_k(η) = j − γ̄_k − η(k−j+2)S is decreasing in η; (C1′)+(C2′) force
    // η = max_k (j − γ̄_k)/((k−j+2) S) over k with p̄_k ≠ 0
    let eta = (j..=dp.d)
        .filter(|&k| !dp.is_zero_k(k))
        .map(|k| {
            (Rational64::from_integer(j as i64) - dp.k_params(k).gamma)
                / (Rational64::from_integer((k - j + 2) as i64) * s)
        })
        .max()
        .ok_or_else(|| Error::Infeasible("no non-zero direction entries".into()))?;
    if !(eta > Rational64::zero()) {
        return Err(Error::Infeasible(
            "rescaling produced a non-positive η".into(),
        ));
    }

    let per_k: Vec<KParams> = (1..=dp.d)
        .map(|k| {
            if k < j {
                KParams::zero()
            } else {
                let kp = dp.k_params(k);
                let denom = Rational64::from_integer((k - j + 1) as i64);
                KParams {
                    alpha: eta * kp.alpha / denom,
                    gamma: kp.gamma,
                    beta: kp.beta.scaled(rat_f64(eta / denom)),
                }
            }
        })
        .collect();
    let rescaled = DirectionParams::new(dp.d, j - 1, per_k)?;
    Ok((eta, rescaled))
}

/// Rescales a j-critical direction down to an i-admissible one with the
/// rescaled λ′ touching zero, iterating one degree at a time. Returns the
/// combined η (the product over steps) and the rescaled parameters.
pub fn rescale_to_lower_critical(
    dp: &DirectionParams,
    i: usize,
) -> Result<(f64, DirectionParams)> {
    if i < 1 || i >= dp.j {
        return Err(Error::InvalidInput(format!(
            "target degree must satisfy 1 ≤ i < j, got i={}, j={}",
            i, dp.j
        )));
    }
    let mut eta_total = Rational64::from_integer(1);
    let mut current = dp.clone();
    while current.j > i {
        let (eta, next) = rescale_one_step(&current)?;
        eta_total *= eta;
        current = next;
    }
    Ok((rat_f64(eta_total), current))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    /// d=2, j=1 direction: p̄_1 = log log n, p̄_2 = (2 log n − log 2)/n.
    /// Critical with k̄ = 1 at every n ≥ 16 (μ̄_1 + ν̄_1 = 0 exactly).
    pub fn lm_style_direction() -> DirectionParams {
        DirectionParams::new(
            2,
            1,
            vec![
                KParams {
                    alpha: rat(0, 1),
                    gamma: rat(0, 1),
                    beta: BetaSpec::ScaledLogLog(1.0),
                },
                KParams {
                    alpha: rat(2, 1),
                    gamma: rat(0, 1),
                    beta: BetaSpec::Constant(-std::f64::consts::LN_2),
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn admissibility_rejections() {
        // (A1): alpha and gamma both positive
        let bad = DirectionParams::new(
            2,
            1,
            vec![
                KParams::zero(),
                KParams {
                    alpha: rat(1, 1),
                    gamma: rat(1, 2),
                    beta: BetaSpec::Zero,
                },
            ],
        );
        assert!(bad.is_err());
        // (A4): no positive alpha above j
        let bad = DirectionParams::new(
            2,
            1,
            vec![
                KParams {
                    alpha: rat(1, 1),
                    gamma: rat(0, 1),
                    beta: BetaSpec::Zero,
                },
                KParams {
                    alpha: rat(0, 1),
                    gamma: rat(0, 1),
                    beta: BetaSpec::Constant(1.0),
                },
            ],
        );
        assert!(bad.is_err());
        // (A2): alpha = 0 with negative beta
        let bad = DirectionParams::new(
            2,
            1,
            vec![
                KParams {
                    alpha: rat(0, 1),
                    gamma: rat(0, 1),
                    beta: BetaSpec::Constant(-1.0),
                },
                KParams {
                    alpha: rat(1, 1),
                    gamma: rat(0, 1),
                    beta: BetaSpec::Zero,
                },
            ],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn pbar_evaluation() {
        // ᾱ_2 = 2, γ̄_2 = 0, β̄_2 = 0 at n = e^10: p̄_2 = 20/e^10
        let dp = DirectionParams::new(
            2,
            1,
            vec![
                KParams::zero(),
                KParams {
                    alpha: rat(2, 1),
                    gamma: rat(0, 1),
                    beta: BetaSpec::Zero,
                },
            ],
        )
        .unwrap();
        let n = (10.0f64).exp().round() as u64; // 22026
        let pv = evaluate_pbar(&dp, n).unwrap();
        let expected = 2.0 * (n as f64).ln() / n as f64;
        assert!((pv.raw_get(2) - expected).abs() < 1e-12);
        assert_eq!(pv.raw_get(1), 0.0);
    }

    #[test]
    fn pbar_negative_at_small_n() {
        let dp = DirectionParams::new(
            2,
            1,
            vec![
                KParams::zero(),
                KParams {
                    alpha: rat(1, 1),
                    gamma: rat(0, 1),
                    beta: BetaSpec::Constant(-100.0),
                },
            ],
        )
        .unwrap();
        assert!(matches!(
            evaluate_pbar(&dp, 50),
            Err(Error::InvalidAtThisN(_))
        ));
    }

    #[test]
    fn lambda_formula_exact() {
        // d=2, j=1, γ̄_1 = 0, ᾱ_2 = 1, γ̄_2 = 0 (eq:lmn):
        // λ̄_1 = 2 − 0 − 1·1 = 1 and λ̄_2 = 2 − 0 − 2·1 = 0
        let dp = DirectionParams::new(
            2,
            1,
            vec![
                KParams {
                    alpha: rat(0, 1),
                    gamma: rat(0, 1),
                    beta: BetaSpec::Constant(0.5),
                },
                KParams {
                    alpha: rat(1, 1),
                    gamma: rat(0, 1),
                    beta: BetaSpec::Zero,
                },
            ],
        )
        .unwrap();
        let report = lambda_mu_nu(&dp, 1000).unwrap();
        assert_eq!(report.per_k[0].lambda, rat(1, 1));
        assert_eq!(report.per_k[1].lambda, rat(0, 1));
    }

    #[test]
    fn nu_at_k_equals_j() {
        let dp = lm_style_direction();
        let report = lambda_mu_nu(&dp, 100).unwrap();
        let r1 = report.per_k.iter().find(|r| r.k == 1).unwrap();
        assert!((r1.nu + (2.0f64).ln()).abs() < 1e-12); // −log(2!)
    }

    #[test]
    fn lm_direction_is_critical() {
        let dp = lm_style_direction();
        let (crit, report) = is_critical_direction(&dp, 500).unwrap();
        assert!(crit, "report: {report:?}");
        assert_eq!(report.k_bar, Some(1));
        assert_eq!(report.critical_set, vec![1]);
        let r1 = report.per_k.iter().find(|r| r.k == 1).unwrap();
        assert_eq!(r1.mu_case, MuCase::Saturated);
        assert!((r1.mu + r1.nu).abs() < 1e-12);
    }

    #[test]
    fn positive_lambda_is_never_critical() {
        let dp = DirectionParams::new(
            2,
            1,
            vec![
                KParams {
                    alpha: rat(0, 1),
                    gamma: rat(0, 1),
                    beta: BetaSpec::Constant(0.5),
                },
                KParams {
                    alpha: rat(1, 2),
                    gamma: rat(0, 1),
                    beta: BetaSpec::Zero,
                },
            ],
        )
        .unwrap();
        // λ̄_2 = 2 − 2·(1/2) = 1 > 0
        let (crit, report) = is_critical_direction(&dp, 10_000).unwrap();
        assert!(!crit);
        assert!(!report.satisfies_c1);
    }

    #[test]
    fn q_bar_cases() {
        let pv = ProbabilityVector {
            n: 10,
            p: vec![0.3, 0.0],
            raw: vec![0.3, 0.0],
        };
        assert_eq!(q_bar(&pv, 1), 1.0);
        let pv = ProbabilityVector {
            n: 10,
            p: vec![0.0, 0.1],
            raw: vec![0.0, 0.1],
        };
        // binom(8,1) = 8 factors of 0.9
        assert!((q_bar(&pv, 1) - 0.9f64.powi(8)).abs() < 1e-12);
        let pv = ProbabilityVector {
            n: 10,
            p: vec![0.0, 1.0],
            raw: vec![0.0, 1.2],
        };
        assert_eq!(q_bar(&pv, 1), 0.0);
    }

    #[test]
    fn expected_xjj_hand_count() {
        // n=6, d=2, j=1, k=1, p = (0.5, 0.2): 15 · 0.5 · 0.8^4 = 3.072
        let pv = ProbabilityVector {
            n: 6,
            p: vec![0.5, 0.2],
            raw: vec![0.5, 0.2],
        };
        let e = exact_expected_xjk(&pv, 1, 1);
        assert!((e - 3.072).abs() < 1e-12, "got {e}");
    }

    #[test]
    fn expected_xjk_zero_probability() {
        let pv = ProbabilityVector {
            n: 6,
            p: vec![0.5, 0.0],
            raw: vec![0.5, 0.0],
        };
        assert_eq!(exact_expected_xjk(&pv, 1, 2), 0.0);
    }

    #[test]
    fn forbidden_count_small_case() {
        // n=6, j=1, k=2, i=2: 6 forbidden 3-sets (hand count)
        assert_eq!(n_i_forbidden(6, 1, 2, 2), 6.0);
    }

    #[test]
    fn e_constant_matches_sum_of_window_expectations() {
        let dp = lm_style_direction();
        for c in [-1.0, 0.0, 1.0, 2.5] {
            let e = e_constant(&dp, 500, c).unwrap();
            let per_k: f64 = critical_window_expectation(&dp, 500, c)
                .unwrap()
                .iter()
                .sum();
            assert!((e - per_k).abs() <= 1e-12 * e.abs().max(1.0));
        }
    }

    #[test]
    fn window_expectation_zero_off_critical() {
        let dp = lm_style_direction();
        let cw = critical_window_expectation(&dp, 500, 0.0).unwrap();
        assert_eq!(cw[2], 0.0); // λ̄_2 = −2: not critical
        assert!(cw[1] > 0.0);
    }

    #[test]
    fn scale_parameters_identity_and_sign() {
        let dp = lm_style_direction();
        let base = lambda_mu_nu(&dp, 10_000).unwrap();
        let scaled = scale_parameters(&dp, 10_000, 0.0).unwrap();
        for (r, s) in base.per_k.iter().zip(scaled.iter()) {
            assert_eq!(r.lambda, s.lambda);
            assert!((r.mu - s.mu).abs() < 1e-12);
        }
        // ξ > 0 decreases μ when Σᾱ > 0
        let scaled_up = scale_parameters(&dp, 10_000, 0.05).unwrap();
        for (r, s) in base.per_k.iter().zip(scaled_up.iter()) {
            assert!(s.mu < r.mu);
        }
    }

    #[test]
    fn rescaling_zeroes_the_max_lambda() {
        // j = 2, d = 3: p̄_2 = log log n, p̄_3 = 3 log n / n
        let dp = DirectionParams::new(
            3,
            2,
            vec![
                KParams::zero(),
                KParams {
                    alpha: rat(0, 1),
                    gamma: rat(0, 1),
                    beta: BetaSpec::ScaledLogLog(1.0),
                },
                KParams {
                    alpha: rat(3, 1),
                    gamma: rat(0, 1),
                    beta: BetaSpec::Zero,
                },
            ],
        )
        .unwrap();
        let (eta, rescaled) = rescale_to_lower_critical(&dp, 1).unwrap();
        assert!(eta > 0.0);
        assert_eq!(rescaled.j, 1);
        rescaled.validate().unwrap();
        // λ′ over the rescaled degree: max is exactly zero
        let report = lambda_mu_nu(&rescaled, 10_000).unwrap();
        let lambdas: Vec<Rational64> = report.per_k.iter().map(|r| r.lambda).collect();
        assert!(lambdas.iter().any(|l| l.is_zero()));
        assert!(lambdas.iter().all(|l| *l <= Rational64::zero()));
        // S = ᾱ_2/1 + ᾱ_3/2 = 3/2; candidates k ∈ {2,3}:
        // k=2: (2−0)/(2·3/2) = 2/3;  k=3: (2−0)/(3·3/2) = 4/9; max = 2/3
        let (eta1, _) = rescale_one_step(&dp).unwrap();
        assert_eq!(eta1, rat(2, 3));
    }
}
