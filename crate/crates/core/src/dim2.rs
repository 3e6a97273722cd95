//! Exact counting and replay for 2-dimensional processes with a saturated
//! 1-skeleton (d = 2, j = 1, p_1 = 1).
//!
//! In this regime the obstruction census reduces to pair-cover bookkeeping
//! over the born triples:
//!   - X_{1,1} = pairs contained in no born triple (isolated edges), and
//!     every such pair extends to M̂_{1,1} with any of the n−2 apexes;
//!   - X_{1,2} = (triple, centre) pairs whose two petals are covered by
//!     that triple alone, each extending to M̂_{1,2} with 2(n−3) tuples.
//!
//! Once every pair is covered, a newly born triple can never become an
//! active (sole-cover) copy, and existing active copies only die, so the
//! first event time at which no copy exists is exactly the hitting time
//! τ_1*. That absorption argument is what lets the replay stop early; it is
//! cross-validated against the generic full-rescan replay in tests.

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::process::{binom_u128, tau_prime, ProcessTrace};
use crate::rng::{derive_rng, uniform_below};

/// Snapshot counts of the obstruction variables.
#[derive(Clone, Copy, Debug, Default)]
pub struct Dim2Counts {
    pub x11: u64,
    pub x12: u64,
    pub xhat11: u64,
    pub xhat12: u64,
}

/// Reusable buffers for repeated trials at fixed n.
pub struct Dim2Workspace {
    n: usize,
    /// cover count per pair, generation-stamped
    pair_cnt: Vec<(u32, u32)>,
    /// sole covering triple per pair (valid when count == 1), stamped
    pair_sole: Vec<(u32, u32)>,
    /// dedup bitset over encoded triples
    born_bits: Vec<u64>,
    generation: u32,
}

fn pair_index(u: usize, v: usize) -> usize {
    // 0-based u < v
    v * (v - 1) / 2 + u
}

impl Dim2Workspace {
    pub fn new(n: usize) -> Self {
        let pairs = n * (n - 1) / 2;
        let triple_space = n * n * n;
        Self {
            n,
            pair_cnt: vec![(0, 0); pairs],
            pair_sole: vec![(0, 0); pairs],
            born_bits: vec![0u64; triple_space.div_ceil(64)],
            generation: 0,
        }
    }

    fn encode(&self, t: [u32; 3]) -> usize {
        ((t[2] as usize) * self.n + t[1] as usize) * self.n + t[0] as usize
    }

    fn cnt(&self, idx: usize) -> u32 {
        let (gen, c) = self.pair_cnt[idx];
        if gen == self.generation {
            c
        } else {
            0
        }
    }

    fn set_cnt(&mut self, idx: usize, c: u32) {
        self.pair_cnt[idx] = (self.generation, c);
    }

    fn sole(&self, idx: usize) -> Option<u32> {
        let (gen, t) = self.pair_sole[idx];
        if gen == self.generation {
            Some(t)
        } else {
            None
        }
    }

    fn set_sole(&mut self, idx: usize, t: u32) {
        self.pair_sole[idx] = (self.generation, t);
    }

    /// Draws a uniformly random unborn triple (0-based sorted vertices) and
    /// marks it born.
    fn draw_fresh_triple(&mut self, rng: &mut ChaCha12Rng) -> [u32; 3] {
        let n = self.n as u64;
        loop {
            let a = uniform_below(rng, n) as u32;
            let b = uniform_below(rng, n) as u32;
            let c = uniform_below(rng, n) as u32;
            if a == b || a == c || b == c {
                continue;
            }
            let mut t = [a, b, c];
            t.sort_unstable();
            let code = self.encode(t);
            if self.born_bits[code / 64] >> (code % 64) & 1 == 1 {
                continue;
            }
            self.born_bits[code / 64] |= 1 << (code % 64);
            return t;
        }
    }

    fn clear_born(&mut self, triples: &[[u32; 3]]) {
        for t in triples {
            let code = self.encode(*t);
            self.born_bits[code / 64] &= !(1 << (code % 64));
        }
    }
}

/// Samples 𝒢(n, (1, p2)) and counts the obstruction variables exactly.
pub fn window_counts(
    ws: &mut Dim2Workspace,
    p2: f64,
    rng: &mut ChaCha12Rng,
) -> Result<Dim2Counts> {
    let n = ws.n;
    if n < 5 {
        return Err(Error::InvalidInput("need n ≥ 5".into()));
    }
    ws.generation = ws.generation.wrapping_add(1);
    let m = binom_u128(n as u64, 3) as u64;
    let count = Binomial::new(m, p2.clamp(0.0, 1.0))
        .map_err(|e| Error::InvalidInput(format!("binomial: {e}")))?
        .sample(rng);

    let mut triples: Vec<[u32; 3]> = Vec::with_capacity(count as usize);
    let mut covered = 0u64;
    for _ in 0..count {
        let t = ws.draw_fresh_triple(rng);
        triples.push(t);
        for (u, v) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            let idx = pair_index(u as usize, v as usize);
            let c = ws.cnt(idx);
            if c == 0 {
                covered += 1;
            }
            ws.set_cnt(idx, c + 1);
        }
    }

    let total_pairs = (n * (n - 1) / 2) as u64;
    let x11 = total_pairs - covered;
    let mut x12 = 0u64;
    for t in &triples {
        for centre in 0..3 {
            let (c, w1, w2) = match centre {
                0 => (t[0], t[1], t[2]),
                1 => (t[1], t[0], t[2]),
                _ => (t[2], t[0], t[1]),
            };
            let p1 = pair_index(c.min(w1) as usize, c.max(w1) as usize);
            let p2i = pair_index(c.min(w2) as usize, c.max(w2) as usize);
            if ws.cnt(p1) == 1 && ws.cnt(p2i) == 1 {
                x12 += 1;
            }
        }
    }

    ws.clear_born(&triples);
    Ok(Dim2Counts {
        x11,
        x12,
        xhat11: x11 * (n as u64 - 2),
        xhat12: x12 * 2 * (n as u64 - 3),
    })
}

/// Hitting data from the fast replay.
#[derive(Clone, Copy, Debug)]
pub struct FastHitting {
    pub tau_star: f64,
    pub tau_doubleprime: f64,
    pub ell: usize,
    pub triples_processed: usize,
}

struct ReplayState {
    uncovered: u64,
    active: u64,
    /// born triples with per-centre liveness
    triples: Vec<([u32; 3], [bool; 3])>,
}

impl ReplayState {
    fn new(n: usize) -> Self {
        Self {
            uncovered: (n * (n - 1) / 2) as u64,
            active: 0,
            triples: Vec::new(),
        }
    }

    /// Processes one triple birth, maintaining the uncovered-pair count and
    /// the active (sole-cover) copy count.
    fn birth(&mut self, ws: &mut Dim2Workspace, t: [u32; 3]) {
        let id = self.triples.len() as u32;
        let pairs = [
            (t[0], t[1], pair_index(t[0] as usize, t[1] as usize)),
            (t[0], t[2], pair_index(t[0] as usize, t[2] as usize)),
            (t[1], t[2], pair_index(t[1] as usize, t[2] as usize)),
        ];
        for &(_, _, idx) in &pairs {
            let old = ws.cnt(idx);
            if old == 0 {
                self.uncovered -= 1;
                ws.set_sole(idx, id);
            } else if old == 1 {
                // the previous sole cover loses any active centres through
                // this pair
                if let Some(prev) = ws.sole(idx) {
                    if prev != id {
                        self.kill_centres_using(ws, prev, idx);
                    }
                }
            }
            ws.set_cnt(idx, old + 1);
        }
        // activity of the newborn triple's own centres
        let mut alive = [false; 3];
        for centre in 0..3 {
            let (c, w1, w2) = match centre {
                0 => (t[0], t[1], t[2]),
                1 => (t[1], t[0], t[2]),
                _ => (t[2], t[0], t[1]),
            };
            let i1 = pair_index(c.min(w1) as usize, c.max(w1) as usize);
            let i2 = pair_index(c.min(w2) as usize, c.max(w2) as usize);
            if ws.cnt(i1) == 1 && ws.cnt(i2) == 1 {
                alive[centre] = true;
                self.active += 1;
            }
        }
        self.triples.push((t, alive));
    }

    fn kill_centres_using(&mut self, ws: &Dim2Workspace, triple_id: u32, pair_idx: usize) {
        let (t, ref mut alive) = self.triples[triple_id as usize];
        for centre in 0..3 {
            if !alive[centre] {
                continue;
            }
            let (c, w1, w2) = match centre {
                0 => (t[0], t[1], t[2]),
                1 => (t[1], t[0], t[2]),
                _ => (t[2], t[0], t[1]),
            };
            let i1 = pair_index(c.min(w1) as usize, c.max(w1) as usize);
            let i2 = pair_index(c.min(w2) as usize, c.max(w2) as usize);
            if i1 == pair_idx || i2 == pair_idx {
                alive[centre] = false;
                self.active -= 1;
            }
        }
        let _ = ws;
    }

    fn no_copies(&self) -> bool {
        self.uncovered == 0 && self.active == 0
    }
}

/// Replays sorted triple events (τ ascending) through the cover-count state,
/// returning τ_1*, τ″, and ℓ. Valid when the 1-skeleton saturates before the
/// stopping time, which is asserted.
pub fn replay_triple_events<I>(
    n: usize,
    tau_p: f64,
    tp: f64,
    events: I,
) -> Result<FastHitting>
where
    I: IntoIterator<Item = ([u32; 3], f64)>,
{
    let mut ws = Dim2Workspace::new(n);
    ws.generation = 1;
    let mut state = ReplayState::new(n);
    let mut tau_star = None;
    let mut tau_doubleprime = None;
    let mut ell = 0usize;
    let mut processed = 0usize;

    for (t, tau) in events {
        // dimension of a copy alive just before this event
        let pre_ell = if state.uncovered > 0 {
            if state.active > 0 {
                2
            } else {
                1
            }
        } else if state.active > 0 {
            2
        } else {
            0
        };
        state.birth(&mut ws, t);
        processed += 1;
        if state.no_copies() {
            if tau_star.is_none() {
                tau_star = Some(tau);
                ell = pre_ell;
            }
            if tau_doubleprime.is_none() && tau > tp {
                tau_doubleprime = Some(tau);
            }
            if tau_star.is_some() && tau_doubleprime.is_some() {
                break;
            }
        }
    }

    let Some(ts) = tau_star else {
        return Err(Error::Infeasible(
            "replay ended with obstructions still alive".into(),
        ));
    };
    if ts <= tau_p {
        return Err(Error::Infeasible(format!(
            "hitting time {ts} not past skeleton saturation {tau_p}; fast path invalid"
        )));
    }
    Ok(FastHitting {
        tau_star: ts,
        tau_doubleprime: tau_doubleprime.unwrap_or(ts),
        ell,
        triples_processed: processed,
    })
}

/// Samples the triple birth process in τ-windows and replays it until the
/// obstruction census empties. Exact: window counts are binomial over the
/// unborn triples and birth times are uniform within the window.
pub fn fast_hitting(n: u64, pbar1: f64, pbar2: f64, seed: u64) -> Result<FastHitting> {
    if n < 5 {
        return Err(Error::InvalidInput("need n ≥ 5".into()));
    }
    if pbar1 <= 0.0 || pbar2 <= 0.0 {
        return Err(Error::InvalidInput(
            "fast path needs both direction entries positive".into(),
        ));
    }
    let tau_p = 1.0 / pbar1;
    let tp = tau_prime(n, 2);
    if tau_p >= tp {
        return Err(Error::Infeasible(format!(
            "1-skeleton saturates at τ = {tau_p}, after τ′ = {tp}"
        )));
    }

    let mut rng = derive_rng(seed, 0x5eed);
    let mut ws = Dim2Workspace::new(n as usize);
    ws.generation = 1;
    let mut state = ReplayState::new(n as usize);
    let m = binom_u128(n, 3) as u64;
    let tau_max2 = 1.0 / pbar2;

    let window = 0.25f64;
    let mut born_total = 0u64;
    let mut window_start = 0.0f64;
    let mut tau_star = None;
    let mut tau_doubleprime = None;
    let mut ell = 0usize;
    let mut processed = 0usize;

    'windows: while window_start < tau_max2 {
        let window_end = (window_start + window).min(tau_max2);
        // P(τ ∈ (start, end] | τ > start) for one triple
        let remaining_prob = 1.0 - window_start * pbar2;
        let q = ((window_end - window_start) * pbar2 / remaining_prob).clamp(0.0, 1.0);
        let count = Binomial::new(m - born_total, q)
            .map_err(|e| Error::InvalidInput(format!("binomial: {e}")))?
            .sample(&mut rng);
        let mut events: Vec<([u32; 3], f64)> = Vec::with_capacity(count as usize);
        for _ in 0..count {
            let t = ws.draw_fresh_triple(&mut rng);
            let tau = window_start + (window_end - window_start) * rng.gen::<f64>();
            events.push((t, tau));
        }
        born_total += count;
        events.sort_unstable_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));

        for (t, tau) in events {
            let pre_ell = if state.uncovered > 0 {
                if state.active > 0 {
                    2
                } else {
                    1
                }
            } else if state.active > 0 {
                2
            } else {
                0
            };
            state.birth(&mut ws, t);
            processed += 1;
            if state.no_copies() {
                if tau_star.is_none() {
                    tau_star = Some(tau);
                    ell = pre_ell;
                }
                if tau_doubleprime.is_none() && tau > tp {
                    tau_doubleprime = Some(tau);
                }
                if tau_star.is_some() && tau_doubleprime.is_some() {
                    break 'windows;
                }
            }
        }
        window_start = window_end;
    }

    let Some(ts) = tau_star else {
        return Err(Error::Infeasible(
            "obstructions survived the whole process".into(),
        ));
    };
    if ts <= tau_p {
        return Err(Error::Infeasible(format!(
            "hitting time {ts} not past skeleton saturation {tau_p}; fast path invalid"
        )));
    }
    Ok(FastHitting {
        tau_star: ts,
        tau_doubleprime: tau_doubleprime.unwrap_or(ts),
        ell,
        triples_processed: processed,
    })
}

/// Runs the fast replay over the triple events of a materialised trace,
/// for cross-validation against the generic full-rescan replay.
pub fn replay_trace(tr: &ProcessTrace) -> Result<FastHitting> {
    if tr.d != 2 {
        return Err(Error::InvalidInput("trace is not 2-dimensional".into()));
    }
    let pbar1 = tr.pbar.raw_get(1);
    if pbar1 <= 0.0 {
        return Err(Error::InvalidInput("p̄_1 must be positive".into()));
    }
    let events = tr.events.iter().filter(|e| e.simplex.len() == 3).map(|e| {
        (
            [
                e.simplex[0] - 1,
                e.simplex[1] - 1,
                e.simplex[2] - 1,
            ],
            e.tau,
        )
    });
    replay_triple_events(
        tr.n as usize,
        1.0 / pbar1,
        tau_prime(tr.n, 2),
        events,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_on_dense_and_empty() {
        let mut ws = Dim2Workspace::new(8);
        let mut rng = derive_rng(3, 0);
        // p2 = 0: all pairs isolated
        let c = window_counts(&mut ws, 0.0, &mut rng).unwrap();
        assert_eq!(c.x11, 28);
        assert_eq!(c.x12, 0);
        assert_eq!(c.xhat11, 28 * 6);
        // p2 = 1: nothing isolated and no sole covers (n ≥ 5)
        let c = window_counts(&mut ws, 1.0, &mut rng).unwrap();
        assert_eq!(c.x11, 0);
        assert_eq!(c.x12, 0);
    }

    #[test]
    fn workspace_generations_reset_cleanly() {
        let mut ws = Dim2Workspace::new(6);
        let mut rng = derive_rng(9, 1);
        let a = window_counts(&mut ws, 0.3, &mut rng).unwrap();
        let _ = a;
        // a fresh trial must see cleared counts: with p2 = 0 everything is
        // isolated again
        let b = window_counts(&mut ws, 0.0, &mut rng).unwrap();
        assert_eq!(b.x11, 15);
    }

    #[test]
    fn replay_single_triple_sequence() {
        // n = 5, triples arrive one at a time; track the census by hand
        let events = vec![
            ([0u32, 1, 2], 0.70f64),
            ([0, 1, 3], 0.74),
            ([0, 1, 4], 0.78),
            ([0, 2, 3], 0.82),
            ([0, 2, 4], 0.86),
            ([0, 3, 4], 0.90),
            ([1, 2, 3], 0.94),
            ([1, 2, 4], 0.98),
            ([1, 3, 4], 1.02),
            ([2, 3, 4], 1.06),
        ];
        // all 10 pairs get covered by the 10 triples; the last uncovered
        // pair {3,4} (0-based) is covered at τ = 0.90, and active copies
        // persist until sole covers get doubled
        let out = replay_triple_events(5, 0.5, tau_prime(5, 2), events).unwrap();
        assert!(out.tau_star >= 0.90);
        assert!(out.tau_doubleprime >= out.tau_star - 1e-12);
    }
}
