use serde::{Deserialize, Serialize};

use crate::cohomology::is_cohom_connected;
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::obstructions::find_mhat_copies;
use crate::params::{evaluate_pbar, DirectionParams, ProbabilityVector};
use crate::ring::RingSpec;
use crate::rng::{derive_rng, uniform01};
use crate::simplex::{combinations, Simplex};

/// Default cap on the number of birth-time events a materialised trace may
/// hold: Σ_k binom(n, k+1) over the non-zero direction entries.
pub const DEFAULT_EVENT_CAP: usize = 5_000_000;

/// One birth: a (k+1)-set together with its scaled birth time.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Event {
    pub simplex: Vec<u32>,
    pub tau: f64,
}

/// A realisation of the birth-time process (𝒢_τ): every eligible set gets a
/// uniform birth time t_K, scaled to τ_K = t_K / p̄_k; the complex at time τ
/// is generated by the sets with τ_K ≤ τ. Events are sorted by scaled time
/// with lexicographic tie-break, so replays are deterministic.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProcessTrace {
    pub n: u64,
    pub d: usize,
    pub seed: u64,
    pub pbar: ProbabilityVector,
    pub tau_max: f64,
    pub events: Vec<Event>,
}

/// Samples a full trace. One uniform birth time per eligible set, drawn in
/// a fixed order (dimension, then lexicographic), so a seed pins the trace.
pub fn sample_process(
    n: u64,
    dp: &DirectionParams,
    seed: u64,
    event_cap: usize,
) -> Result<ProcessTrace> {
    let pv = evaluate_pbar(dp, n)?;
    if pv.raw_get(dp.d) == 0.0 {
        return Err(Error::InvalidInput(
            "the process needs p̄_d ≠ 0 (τ_max = 1/p̄_d)".into(),
        ));
    }
    let mut expected: u128 = 0;
    for k in 1..=dp.d {
        if pv.raw_get(k) > 0.0 {
            expected += binom_u128(n, (k + 1) as u64);
        }
    }
    if expected > event_cap as u128 {
        return Err(Error::GuardExceeded(format!(
            "trace would hold {expected} events, cap is {event_cap}"
        )));
    }

    let mut rng = derive_rng(seed, 0);
    let vertices: Vec<u32> = (1..=n as u32).collect();
    let mut events = Vec::with_capacity(expected as usize);
    for k in 1..=dp.d {
        let pbar_k = pv.raw_get(k);
        if pbar_k == 0.0 {
            continue;
        }
        for set in combinations(&vertices, k + 1) {
            let t = uniform01(&mut rng);
            events.push(Event {
                simplex: set,
                tau: t / pbar_k,
            });
        }
    }
    events.sort_unstable_by(|a, b| {
        a.tau
            .partial_cmp(&b.tau)
            .unwrap()
            .then_with(|| a.simplex.cmp(&b.simplex))
    });
    let tau_max = 1.0 / pv.raw_get(dp.d);
    Ok(ProcessTrace {
        n,
        d: dp.d,
        seed,
        pbar: pv,
        tau_max,
        events,
    })
}

pub fn binom_u128(n: u64, m: u64) -> u128 {
    if m > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..m {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// The complex generated by the events with τ_K ≤ tau, plus singletons.
/// Marginally distributed as 𝒢(n, τ p̄).
pub fn snapshot(tr: &ProcessTrace, tau: f64) -> Result<Complex> {
    if !(0.0..=tr.tau_max).contains(&tau) {
        return Err(Error::InvalidInput(format!(
            "tau = {tau} outside [0, τ_max = {}]",
            tr.tau_max
        )));
    }
    let mut c = Complex::singletons(tr.n as u32, tr.d);
    for e in &tr.events {
        if e.tau > tau {
            break;
        }
        c.add_simplex_mut(&Simplex::from_sorted(e.simplex.clone()))?;
    }
    Ok(c)
}

/// Hitting-time data for degree j: τ_j* (the time after which no copy of
/// M̂_{j,k} ever exists again), the dimension ℓ of a last vanishing copy,
/// and τ″ (the first event time after τ′ with no copies).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HittingReport {
    pub j: usize,
    pub tau_star: f64,
    /// no obstruction ever appeared in the trace
    pub never_obstructed: bool,
    /// copies still present at the end of the replay
    pub obstructed_at_end: bool,
    pub ell: Option<usize>,
    pub tau_prime: f64,
    pub tau_doubleprime: f64,
    /// τ″ fell back to τ′ because no event time beyond τ′ exists
    pub tau_doubleprime_defaulted: bool,
    /// X̂_{j,k} for k = j..=d after each event, in event order
    pub xhat_per_event: Vec<Vec<usize>>,
}

/// τ′ = 1 − log log n / (10 d log n).
pub fn tau_prime(n: u64, d: usize) -> f64 {
    let ln_n = (n as f64).ln();
    1.0 - ln_n.ln() / (10.0 * d as f64 * ln_n)
}

/// Replays the trace, recomputing X̂_{j,k} for all k after every event
/// (full rescan; the complex gains one generator per step). τ_j* is found
/// by a forward scan followed by a backward max.
pub fn hitting_time(tr: &ProcessTrace, j: usize) -> Result<HittingReport> {
    let mut complex = Complex::singletons(tr.n as u32, tr.d);
    let mut xhat_per_event = Vec::with_capacity(tr.events.len());
    for e in &tr.events {
        complex.add_simplex_mut(&Simplex::from_sorted(e.simplex.clone()))?;
        let counts: Vec<usize> = (j..=tr.d)
            .map(|k| find_mhat_copies(&complex, j, k).map(|v| v.len()))
            .collect::<Result<_>>()?;
        xhat_per_event.push(counts);
    }

    let occupied: Vec<bool> = xhat_per_event
        .iter()
        .map(|c| c.iter().any(|x| *x > 0))
        .collect();
    let last_occupied = occupied.iter().rposition(|&o| o);

    let (tau_star, never_obstructed, obstructed_at_end, ell) = match last_occupied {
        None => (0.0, true, false, None),
        Some(m) => {
            let ell = xhat_per_event[m]
                .iter()
                .enumerate()
                .filter(|(_, x)| **x > 0)
                .map(|(i, _)| i + j)
                .max();
            if m + 1 < tr.events.len() {
                (tr.events[m + 1].tau, false, false, ell)
            } else {
                // still obstructed when the trace ends
                (tr.tau_max, false, true, ell)
            }
        }
    };

    let tp = tau_prime(tr.n, tr.d);
    let mut tau_doubleprime = tp;
    let mut defaulted = true;
    for (i, e) in tr.events.iter().enumerate() {
        if e.tau > tp && !occupied[i] {
            tau_doubleprime = e.tau;
            defaulted = false;
            break;
        }
    }

    Ok(HittingReport {
        j,
        tau_star,
        never_obstructed,
        obstructed_at_end,
        ell,
        tau_prime: tp,
        tau_doubleprime,
        tau_doubleprime_defaulted: defaulted,
        xhat_per_event,
    })
}

/// A maximal τ-interval [start, end) on which the process is
/// j-cohom-connected; `end` is τ_max for the final state.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConnInterval {
    pub start: f64,
    pub end: f64,
}

/// Default guards for per-event cohomology replays.
pub const CONN_EVENT_GUARD: usize = 2_000;
pub const CONN_SIMPLEX_GUARD: usize = 400;

/// Evaluates is_cohom_connected after every event and merges the event
/// intervals on which it holds.
pub fn connectedness_intervals(
    tr: &ProcessTrace,
    j: usize,
    ring: RingSpec,
) -> Result<Vec<ConnInterval>> {
    if tr.events.len() > CONN_EVENT_GUARD {
        return Err(Error::GuardExceeded(format!(
            "{} events exceeds the per-event cohomology guard {CONN_EVENT_GUARD}",
            tr.events.len()
        )));
    }
    let mut complex = Complex::singletons(tr.n as u32, tr.d);
    let mut intervals: Vec<ConnInterval> = Vec::new();
    let mut current_start: Option<f64> = None;

    // state on [0, first event): singletons only
    let check_state = |c: &Complex, start: f64, end: f64,
                           intervals: &mut Vec<ConnInterval>,
                           current_start: &mut Option<f64>|
     -> Result<()> {
        if c.count_of_dim(j) > CONN_SIMPLEX_GUARD {
            return Err(Error::GuardExceeded(format!(
                "{} j-simplices exceeds the cohomology guard {CONN_SIMPLEX_GUARD}",
                c.count_of_dim(j)
            )));
        }
        let ok = is_cohom_connected(c, j, ring)?;
        match (ok, current_start.is_some()) {
            (true, false) => *current_start = Some(start),
            (false, true) => {
                intervals.push(ConnInterval {
                    start: current_start.take().unwrap(),
                    end: start,
                });
            }
            _ => {}
        }
        let _ = end;
        Ok(())
    };

    let first_tau = tr.events.first().map(|e| e.tau).unwrap_or(tr.tau_max);
    check_state(&complex, 0.0, first_tau, &mut intervals, &mut current_start)?;
    for (i, e) in tr.events.iter().enumerate() {
        complex.add_simplex_mut(&Simplex::from_sorted(e.simplex.clone()))?;
        let end = tr
            .events
            .get(i + 1)
            .map(|x| x.tau)
            .unwrap_or(tr.tau_max);
        check_state(&complex, e.tau, end, &mut intervals, &mut current_start)?;
    }
    if let Some(s) = current_start {
        intervals.push(ConnInterval {
            start: s,
            end: tr.tau_max,
        });
    }
    Ok(intervals)
}

/// A hand-scripted trace, used to replay documented event sequences.
pub fn scripted_trace(n: u64, d: usize, pbar: ProbabilityVector, events: Vec<(Vec<u32>, f64)>) -> ProcessTrace {
    let tau_max = events.iter().map(|e| e.1).fold(1.0f64, f64::max) + 1.0;
    let mut evs: Vec<Event> = events
        .into_iter()
        .map(|(s, tau)| Event { simplex: s, tau })
        .collect();
    evs.sort_unstable_by(|a, b| {
        a.tau
            .partial_cmp(&b.tau)
            .unwrap()
            .then_with(|| a.simplex.cmp(&b.simplex))
    });
    ProcessTrace {
        n,
        d,
        seed: 0,
        pbar,
        tau_max,
        events: evs,
    }
}
