use std::collections::HashMap;

use rand_chacha::ChaCha12Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::dim2::{fast_hitting, window_counts, Dim2Workspace};
use crate::error::{Error, Result};
use crate::matrix::rank_f2;
use crate::obstructions::{find_m_copies, find_mhat_copies};
use crate::params::{
    critical_window_expectation, evaluate_pbar, exact_expected_xjk, DirectionParams,
    ProbabilityVector,
};
use crate::process::binom_u128;
use crate::rng::{derive_rng, uniform01};
use crate::simplex::{combinations, Simplex};

/// Per-k empirical summary of one Monte Carlo experiment.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CountSummary {
    pub k: usize,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
    /// empirical distribution: count value → frequency
    pub distribution: HashMap<u64, u64>,
    /// TV distance to Poisson with the theoretical critical-window mean
    pub tv_poisson_theoretical: Option<f64>,
    /// TV distance to Poisson with the exact finite-n mean
    pub tv_poisson_exact: Option<f64>,
    pub theoretical_mean: Option<f64>,
    pub exact_mean: Option<f64>,
}

/// Counts of X_{j,k} and X̂_{j,k} over independent snapshots, with the
/// derived statistics.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WindowStats {
    pub n: u64,
    pub j: usize,
    pub d: usize,
    pub tau: f64,
    pub trials: u64,
    pub seed: u64,
    pub x: Vec<CountSummary>,
    pub xhat: Vec<CountSummary>,
    /// fraction of trials with no M copy for any k
    pub pr_no_copies: f64,
    /// exp(−Σ_k exact means), the Poisson-window prediction for the above
    pub predicted_no_copies: f64,
    /// joint TV distance to the product of Poissons with exact means
    pub tv_joint_exact: Option<f64>,
    /// empirical Pr(j-cohom-connected) over F_2, when affordable
    pub pr_cohom_connected: Option<f64>,
    /// exp(−ℰ) when the direction is critical
    pub predicted_cohom_connected: Option<f64>,
}

/// Poisson pmf by the multiplicative recurrence.
pub fn poisson_pmf(lambda: f64, k: u64) -> f64 {
    if lambda <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let mut p = (-lambda).exp();
    for i in 1..=k {
        p *= lambda / i as f64;
    }
    p
}

/// Total variation distance between an empirical distribution and Poisson(λ).
pub fn tv_to_poisson(dist: &HashMap<u64, u64>, trials: u64, lambda: f64) -> f64 {
    let max_k = dist.keys().copied().max().unwrap_or(0);
    let mut tv = 0.0;
    let mut poisson_mass_counted = 0.0;
    for k in 0..=max_k {
        let emp = *dist.get(&k).unwrap_or(&0) as f64 / trials as f64;
        let poi = poisson_pmf(lambda, k);
        tv += (emp - poi).abs();
        poisson_mass_counted += poi;
    }
    tv += 1.0 - poisson_mass_counted; // tail where the empirical mass is zero
    tv / 2.0
}

/// Joint TV distance between empirical count vectors and a product of
/// Poissons.
pub fn tv_joint_to_poisson(
    joint: &HashMap<Vec<u64>, u64>,
    trials: u64,
    lambdas: &[f64],
) -> f64 {
    let mut tv = 0.0;
    let mut q_mass_counted = 0.0;
    for (vector, freq) in joint {
        let emp = *freq as f64 / trials as f64;
        let q: f64 = vector
            .iter()
            .zip(lambdas.iter())
            .map(|(&x, &l)| poisson_pmf(l, x))
            .product();
        tv += (emp - q).abs();
        q_mass_counted += q;
    }
    tv += 1.0 - q_mass_counted;
    tv / 2.0
}

fn summarize(
    k: usize,
    samples: &[u64],
    theoretical: Option<f64>,
    exact: Option<f64>,
) -> CountSummary {
    let trials = samples.len() as u64;
    let mean = samples.iter().map(|&x| x as f64).sum::<f64>() / trials as f64;
    let variance = samples
        .iter()
        .map(|&x| (x as f64 - mean).powi(2))
        .sum::<f64>()
        / (trials.saturating_sub(1).max(1)) as f64;
    let std_error = (variance / trials as f64).sqrt();
    let mut distribution = HashMap::new();
    for &x in samples {
        *distribution.entry(x).or_insert(0) += 1;
    }
    let tv_theory = theoretical.map(|l| tv_to_poisson(&distribution, trials, l));
    let tv_exact = exact.map(|l| tv_to_poisson(&distribution, trials, l));
    CountSummary {
        k,
        mean,
        variance,
        std_error,
        distribution,
        tv_poisson_theoretical: tv_theory,
        tv_poisson_exact: tv_exact,
        theoretical_mean: theoretical,
        exact_mean: exact,
    }
}

/// Samples 𝒢(n, p) directly: each (k+1)-set is a generator with
/// probability p_k, independently. Suitable for small n.
pub fn sample_gnp(n: u64, pv: &ProbabilityVector, rng: &mut ChaCha12Rng) -> Result<Complex> {
    let d = pv.d();
    let mut c = Complex::singletons(n as u32, d);
    let vertices: Vec<u32> = (1..=n as u32).collect();
    for k in 1..=d {
        let p = pv.get(k);
        if p <= 0.0 {
            continue;
        }
        for set in combinations(&vertices, k + 1) {
            if p >= 1.0 || uniform01(rng) < p {
                c.add_simplex_mut(&Simplex::from_sorted(set))?;
            }
        }
    }
    Ok(c)
}

const GENERIC_MC_N_GUARD: u64 = 64;

/// Empirical means of X_{j,k} and X̂_{j,k} over independent snapshots of
/// 𝒢(n, τ p̄), with standard errors and exact-mean reference values.
pub fn mc_expectations(
    n: u64,
    dp: &DirectionParams,
    tau: f64,
    trials: u64,
    seed: u64,
) -> Result<WindowStats> {
    if trials < 1 {
        return Err(Error::InvalidInput("need at least one trial".into()));
    }
    if n > GENERIC_MC_N_GUARD {
        return Err(Error::GuardExceeded(format!(
            "generic obstruction scans guard at n ≤ {GENERIC_MC_N_GUARD}; got n = {n}"
        )));
    }
    let pv = evaluate_pbar(dp, n)?.at_tau(tau);
    let j = dp.j;
    let d = dp.d;
    let ks: Vec<usize> = (j..=d).collect();

    let per_trial: Vec<(Vec<u64>, Vec<u64>)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = derive_rng(seed, trial);
            let c = sample_gnp(n, &pv, &mut rng)?;
            let mut xs = Vec::with_capacity(ks.len());
            let mut xhats = Vec::with_capacity(ks.len());
            for &k in &ks {
                xs.push(find_m_copies(&c, j, k)?.len() as u64);
                xhats.push(find_mhat_copies(&c, j, k)?.len() as u64);
            }
            Ok((xs, xhats))
        })
        .collect::<Result<_>>()?;

    build_stats(n, j, d, tau, trials, seed, &pv, dp, per_trial, None)
}

#[allow(clippy::too_many_arguments)]
fn build_stats(
    n: u64,
    j: usize,
    d: usize,
    tau: f64,
    trials: u64,
    seed: u64,
    pv: &ProbabilityVector,
    dp: &DirectionParams,
    per_trial: Vec<(Vec<u64>, Vec<u64>)>,
    window_c: Option<f64>,
) -> Result<WindowStats> {
    let ks: Vec<usize> = (j..=d).collect();
    let theoretical: Vec<Option<f64>> = match window_c {
        Some(c) => {
            let cw = critical_window_expectation(dp, n, c)?;
            ks.iter().map(|&k| Some(cw[k])).collect()
        }
        None => ks.iter().map(|_| None).collect(),
    };
    let exact: Vec<f64> = ks.iter().map(|&k| exact_expected_xjk(pv, j, k)).collect();

    let mut x_summaries = Vec::new();
    let mut xhat_summaries = Vec::new();
    for (i, &k) in ks.iter().enumerate() {
        let xs: Vec<u64> = per_trial.iter().map(|t| t.0[i]).collect();
        let xh: Vec<u64> = per_trial.iter().map(|t| t.1[i]).collect();
        x_summaries.push(summarize(k, &xs, theoretical[i], Some(exact[i])));
        xhat_summaries.push(summarize(k, &xh, None, None));
    }

    let no_copies = per_trial
        .iter()
        .filter(|t| t.0.iter().all(|&x| x == 0))
        .count() as f64
        / trials as f64;
    let predicted_no_copies = (-exact.iter().sum::<f64>()).exp();

    let mut joint: HashMap<Vec<u64>, u64> = HashMap::new();
    for t in &per_trial {
        *joint.entry(t.0.clone()).or_insert(0) += 1;
    }
    let tv_joint_exact = Some(tv_joint_to_poisson(&joint, trials, &exact));

    Ok(WindowStats {
        n,
        j,
        d,
        tau,
        trials,
        seed,
        x: x_summaries,
        xhat: xhat_summaries,
        pr_no_copies: no_copies,
        predicted_no_copies,
        tv_joint_exact,
        pr_cohom_connected: None,
        predicted_cohom_connected: None,
    })
}

/// Cap on the number of j-simplices for the optional per-snapshot
/// cohomology inside Monte Carlo loops.
pub const MC_COHOM_SIMPLEX_GUARD: usize = 4_000;

/// Joint distribution of (X_{j,j}, …, X_{j,d}) at τ = 1 + c/log n for a
/// critical direction, against the product-Poisson predictions. Uses the
/// saturated-skeleton fast path when it applies (d = 2, j = 1, p_1 ≥ 1),
/// the generic sampler otherwise.
pub fn mc_poisson_window(
    n: u64,
    dp: &DirectionParams,
    c: f64,
    trials: u64,
    seed: u64,
    with_cohomology: bool,
) -> Result<WindowStats> {
    if trials < 1 {
        return Err(Error::InvalidInput("need at least one trial".into()));
    }
    let tau = 1.0 + c / (n as f64).ln();
    let pv = evaluate_pbar(dp, n)?.at_tau(tau);

    let fast_applicable = dp.d == 2 && dp.j == 1 && pv.get(1) >= 1.0 && n >= 5;
    let per_trial: Vec<(Vec<u64>, Vec<u64>)> = if fast_applicable {
        let p2 = pv.get(2);
        let mut ws = Dim2Workspace::new(n as usize);
        (0..trials)
            .map(|trial| {
                let mut rng = derive_rng(seed, trial);
                let counts = window_counts(&mut ws, p2, &mut rng)?;
                Ok((
                    vec![counts.x11, counts.x12],
                    vec![counts.xhat11, counts.xhat12],
                ))
            })
            .collect::<Result<_>>()?
    } else {
        if n > GENERIC_MC_N_GUARD {
            return Err(Error::GuardExceeded(format!(
                "generic obstruction scans guard at n ≤ {GENERIC_MC_N_GUARD}; got n = {n}"
            )));
        }
        let ks: Vec<usize> = (dp.j..=dp.d).collect();
        (0..trials)
            .into_par_iter()
            .map(|trial| {
                let mut rng = derive_rng(seed, trial);
                let complex = sample_gnp(n, &pv, &mut rng)?;
                let mut xs = Vec::new();
                let mut xhats = Vec::new();
                for &k in &ks {
                    xs.push(find_m_copies(&complex, dp.j, k)?.len() as u64);
                    xhats.push(find_mhat_copies(&complex, dp.j, k)?.len() as u64);
                }
                Ok((xs, xhats))
            })
            .collect::<Result<_>>()?
    };

    let mut stats = build_stats(
        n, dp.j, dp.d, tau, trials, seed, &pv, dp, per_trial, Some(c),
    )?;

    if with_cohomology {
        // affordable only when the j-simplex count stays modest
        let expected_j_simplices = if pv.get(dp.j) >= 1.0 {
            binom_u128(n, (dp.j + 1) as u64) as f64
        } else {
            binom_u128(n, (dp.j + 1) as u64) as f64 * pv.get(dp.j)
        };
        if expected_j_simplices <= MC_COHOM_SIMPLEX_GUARD as f64 && n <= GENERIC_MC_N_GUARD {
            let connected: u64 = (0..trials)
                .into_par_iter()
                .map(|trial| {
                    let mut rng = derive_rng(seed, trial);
                    let complex = sample_gnp(n, &pv, &mut rng)?;
                    Ok(crate::cohomology::is_cohom_connected(
                        &complex,
                        dp.j,
                        crate::ring::RingSpec::PrimeField(2),
                    )? as u64)
                })
                .collect::<Result<Vec<u64>>>()?
                .iter()
                .sum();
            stats.pr_cohom_connected = Some(connected as f64 / trials as f64);
        }
        stats.predicted_cohom_connected =
            Some((-crate::params::e_constant(dp, n, c)?).exp());
    }
    Ok(stats)
}

/// One row of the threshold sweep.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: u64,
    pub tau: f64,
    pub trials: u64,
    pub pr_topologically_connected: f64,
    /// empirical Pr(H^j = 0) over F_2; None when past the rank guard
    pub pr_hj_zero: Option<f64>,
    /// per-n median of τ_j* over the hitting trials (repeated on each row)
    pub median_tau_star: f64,
}

/// Cap on the F_2 rank work per sweep snapshot: #j-simplices.
pub const SWEEP_RANK_GUARD: usize = 3_500;

/// Sweeps a τ-grid for each n: empirical Pr(topologically connected),
/// Pr(H^j = 0) where affordable, and the per-n median hitting time τ_j*.
/// Currently specialised to d = 2, j = 1 directions with a saturating
/// 1-skeleton at large n; small n fall back to generic sampling.
pub fn threshold_sweep(
    n_list: &[u64],
    dp: &DirectionParams,
    tau_grid: &[f64],
    trials: u64,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    if dp.j != 1 || dp.d != 2 {
        return Err(Error::InvalidInput(
            "the sweep is implemented for d = 2, j = 1 directions".into(),
        ));
    }
    let mut rows = Vec::new();
    for (ni, &n) in n_list.iter().enumerate() {
        let pv = evaluate_pbar(dp, n)?;
        // median hitting time over the trials
        let mut tau_stars: Vec<f64> = (0..trials)
            .map(|t| {
                fast_hitting(
                    n,
                    pv.raw_get(1),
                    pv.raw_get(2),
                    crate::rng::splitmix64(seed ^ (ni as u64) << 32 ^ t),
                )
                .map(|f| f.tau_star)
            })
            .collect::<Result<_>>()?;
        tau_stars.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        let median = tau_stars[tau_stars.len() / 2];

        for (ti, &tau) in tau_grid.iter().enumerate() {
            let ptau = pv.at_tau(tau);
            let mut connected_hits = 0u64;
            let mut hj_zero_hits = 0u64;
            let pairs_total = binom_u128(n, 2) as usize;
            let rank_ok = pairs_total <= SWEEP_RANK_GUARD || ptau.get(1) < 1.0;
            let mut hj_evaluated = 0u64;
            for t in 0..trials {
                let mut rng = derive_rng(seed ^ xs_weep(ni, ti), t);
                let (conn, hj) = sweep_trial_d2(n, &ptau, &mut rng, rank_ok)?;
                connected_hits += conn as u64;
                if let Some(z) = hj {
                    hj_evaluated += 1;
                    hj_zero_hits += z as u64;
                }
            }
            rows.push(SweepRow {
                n,
                tau,
                trials,
                pr_topologically_connected: connected_hits as f64 / trials as f64,
                pr_hj_zero: if hj_evaluated > 0 {
                    Some(hj_zero_hits as f64 / hj_evaluated as f64)
                } else {
                    None
                },
                median_tau_star: median,
            });
        }
    }
    Ok(rows)
}

fn xs_weep(ni: usize, ti: usize) -> u64 {
    (ni as u64) << 40 | (ti as u64) << 8 | 1
}

/// One sweep trial at d = 2, j = 1: sample pairs and triples, measure
/// vertex-connectivity with union-find and H^1(F_2) = 0 by rank when
/// affordable.
fn sweep_trial_d2(
    n: u64,
    pv: &ProbabilityVector,
    rng: &mut ChaCha12Rng,
    rank_ok: bool,
) -> Result<(bool, Option<bool>)> {
    let p1 = pv.get(1);
    let p2 = pv.get(2);
    let nu = n as usize;

    // sample edges
    let mut edges: Vec<(u32, u32)> = Vec::new();
    if p1 >= 1.0 {
        for v in 1..nu {
            for u in 0..v {
                edges.push((u as u32, v as u32));
            }
        }
    } else if p1 > 0.0 {
        for v in 1..nu {
            for u in 0..v {
                if uniform01(rng) < p1 {
                    edges.push((u as u32, v as u32));
                }
            }
        }
    }

    // sample triples by count + distinct draws
    let m = binom_u128(n, 3) as u64;
    let count = Binomial::new(m, p2.clamp(0.0, 1.0))
        .map_err(|e| Error::InvalidInput(format!("binomial: {e}")))?
        .sample(rng);
    let mut seen = std::collections::HashSet::with_capacity(count as usize * 2);
    let mut triples: Vec<[u32; 3]> = Vec::with_capacity(count as usize);
    while (triples.len() as u64) < count {
        let a = crate::rng::uniform_below(rng, n) as u32;
        let b = crate::rng::uniform_below(rng, n) as u32;
        let c = crate::rng::uniform_below(rng, n) as u32;
        if a == b || b == c || a == c {
            continue;
        }
        let mut t = [a, b, c];
        t.sort_unstable();
        let code = (t[2] as u64 * n + t[1] as u64) * n + t[0] as u64;
        if seen.insert(code) {
            triples.push(t);
        }
    }

    // vertex connectivity of the underlying hypergraph
    let mut uf = crate::complex::UnionFind::new(nu);
    for &(u, v) in &edges {
        uf.union(u as usize, v as usize);
    }
    for t in &triples {
        uf.union(t[0] as usize, t[1] as usize);
        uf.union(t[1] as usize, t[2] as usize);
    }
    let root = uf.find(0);
    let connected = (1..nu).all(|v| uf.find(v) == root);

    if !rank_ok {
        return Ok((connected, None));
    }

    // H^1(F_2) = 0 iff rank δ^1 = #edges − rank δ^0; edges here are the
    // 1-simplices of the closure (pairs inside born triples count too)
    let mut pair_present = vec![false; nu * (nu - 1) / 2];
    for &(u, v) in &edges {
        pair_present[pair_idx(u as usize, v as usize)] = true;
    }
    for t in &triples {
        pair_present[pair_idx(t[0] as usize, t[1] as usize)] = true;
        pair_present[pair_idx(t[0] as usize, t[2] as usize)] = true;
        pair_present[pair_idx(t[1] as usize, t[2] as usize)] = true;
    }
    let mut col_of_pair: Vec<u32> = vec![u32::MAX; pair_present.len()];
    let mut ncols = 0u32;
    for (i, &present) in pair_present.iter().enumerate() {
        if present {
            col_of_pair[i] = ncols;
            ncols += 1;
        }
    }
    if ncols as usize > SWEEP_RANK_GUARD {
        return Ok((connected, None));
    }
    let words = (ncols as usize).div_ceil(64);
    let rows: Vec<Vec<u64>> = triples
        .iter()
        .map(|t| {
            let mut row = vec![0u64; words];
            for (u, v) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                let col = col_of_pair[pair_idx(u as usize, v as usize)] as usize;
                row[col / 64] |= 1 << (col % 64);
            }
            row
        })
        .collect();
    let rank_up = rank_f2(rows, ncols as usize);

    // rank δ^0 over F_2 = n − #components of the 1-skeleton closure
    let mut uf1 = crate::complex::UnionFind::new(nu);
    for (i, &present) in pair_present.iter().enumerate() {
        if present {
            let (u, v) = pair_unidx(i);
            uf1.union(u, v);
        }
    }
    let comps1: std::collections::HashSet<usize> = (0..nu).map(|v| uf1.find(v)).collect();
    let rank_down = nu - comps1.len();
    let hj_zero = rank_up == (ncols as usize) - rank_down;
    Ok((connected, Some(hj_zero)))
}

fn pair_idx(u: usize, v: usize) -> usize {
    debug_assert!(u < v);
    v * (v - 1) / 2 + u
}

fn pair_unidx(idx: usize) -> (usize, usize) {
    let mut v = 1usize;
    while (v + 1) * v / 2 <= idx {
        v += 1;
    }
    (idx - v * (v - 1) / 2, v)
}
