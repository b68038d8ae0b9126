//! Rich 2-to-1 games at toy scale: bipartite regular graphs whose edge
//! constraints are 2-to-1 coordinate maps, optionally planted satisfiable.

use crate::error::Error;
use crate::influence::{sample_two_to_one, TwoToOneMap};
use crate::rngutil::Rng;
use crate::Result;
use rand::Rng as _;
use serde::Serialize;

#[derive(Debug, Clone)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub map: TwoToOneMap,
}

/// A 2-to-1 game: left alphabet `[n]`, right alphabet `[n/2]`, one 2-to-1
/// map per edge. Richness here is distributional — maps are sampled
/// uniformly (or uniformly conditioned on a planted labeling) — and is
/// spot-checked statistically, not certified.
#[derive(Debug, Clone)]
pub struct RichGame {
    pub n: usize,
    pub left: usize,
    pub right: usize,
    pub edges: Vec<Edge>,
    pub planted: Option<(Vec<usize>, Vec<usize>)>,
}

impl RichGame {
    /// Random bipartite regular game by the configuration model. With
    /// `planted`, a satisfying labeling is drawn first and every edge map
    /// is sampled uniformly conditioned on satisfying it.
    pub fn build_toy(
        left: usize,
        right: usize,
        degree_left: usize,
        n: usize,
        planted: bool,
        rng: &mut Rng,
    ) -> Result<RichGame> {
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::Precondition("left alphabet size must be even".into()));
        }
        if !(degree_left * left).is_multiple_of(right) {
            return Err(Error::Precondition(
                "degree sequence infeasible: left stubs must split evenly".into(),
            ));
        }
        let labeling = if planted {
            let a_l: Vec<usize> = (0..left).map(|_| rng.gen_range(0..n)).collect();
            let a_r: Vec<usize> = (0..right).map(|_| rng.gen_range(0..n / 2)).collect();
            Some((a_l, a_r))
        } else {
            None
        };
        // configuration model pairing
        let mut right_stubs: Vec<usize> = (0..degree_left * left).map(|s| s % right).collect();
        for i in (1..right_stubs.len()).rev() {
            let j = rng.gen_range(0..=i);
            right_stubs.swap(i, j);
        }
        let mut edges = Vec::with_capacity(degree_left * left);
        for (stub, &v) in right_stubs.iter().enumerate() {
            let u = stub / degree_left;
            let map = match &labeling {
                Some((a_l, a_r)) => sample_conditioned_map(n, a_l[u], a_r[v], rng),
                None => sample_two_to_one(n, rng),
            };
            edges.push(Edge { u, v, map });
        }
        Ok(RichGame {
            n,
            left,
            right,
            edges,
            planted: labeling,
        })
    }

    pub fn degree_of(&self, u: usize) -> usize {
        self.edges.iter().filter(|e| e.u == u).count()
    }

    /// Fraction of edges a labeling satisfies.
    pub fn value_of(&self, a_l: &[usize], a_r: &[usize]) -> f64 {
        let sat = self
            .edges
            .iter()
            .filter(|e| e.map.apply(a_l[e.u]) == a_r[e.v])
            .count();
        sat as f64 / self.edges.len() as f64
    }

    pub fn is_satisfied_by(&self, a_l: &[usize], a_r: &[usize]) -> bool {
        self.edges
            .iter()
            .all(|e| e.map.apply(a_l[e.u]) == a_r[e.v])
    }

    /// JSON with explicit fiber lists per edge.
    pub fn to_json(&self) -> serde_json::Value {
        let edges: Vec<serde_json::Value> = self
            .edges
            .iter()
            .map(|e| {
                let fibers: Vec<[usize; 2]> = (0..self.n / 2)
                    .map(|j| {
                        let (a, b) = e.map.fiber(j);
                        [a, b]
                    })
                    .collect();
                serde_json::json!({"u": e.u, "v": e.v, "fibers": fibers})
            })
            .collect();
        serde_json::json!({
            "n": self.n,
            "left": self.left,
            "right": self.right,
            "edges": edges,
        })
    }
}

/// Uniform 2-to-1 map conditioned on sending `sigma_l` to `sigma_r`.
fn sample_conditioned_map(n: usize, sigma_l: usize, sigma_r: usize, rng: &mut Rng) -> TwoToOneMap {
    // partner of the planted left label, uniform among the rest
    let mut others: Vec<usize> = (0..n).filter(|&i| i != sigma_l).collect();
    for i in (1..others.len()).rev() {
        let j = rng.gen_range(0..=i);
        others.swap(i, j);
    }
    let partner = others[0];
    let rest: Vec<usize> = others[1..].to_vec();
    let mut outputs: Vec<usize> = (0..n / 2).filter(|&j| j != sigma_r).collect();
    for i in (1..outputs.len()).rev() {
        let j = rng.gen_range(0..=i);
        outputs.swap(i, j);
    }
    let mut map = vec![0usize; n];
    map[sigma_l] = sigma_r;
    map[partner] = sigma_r;
    for (pair, &out) in rest.chunks(2).zip(&outputs) {
        map[pair[0]] = out;
        map[pair[1]] = out;
    }
    TwoToOneMap::new(map).expect("constructed map is 2-to-1")
}

#[derive(Debug, Clone, Serialize)]
pub struct GameValueReport {
    pub value: f64,
    pub assignments_tried: u64,
}

/// Exact game value by exhausting labelings; errors above the cap.
pub fn game_value_exact(game: &RichGame, cap: u64) -> Result<GameValueReport> {
    let l_choices = game.n as u64;
    let r_choices = (game.n / 2) as u64;
    let mut total: u64 = 1;
    for _ in 0..game.left {
        total = total.saturating_mul(l_choices);
    }
    for _ in 0..game.right {
        total = total.saturating_mul(r_choices);
    }
    if total > cap {
        return Err(Error::ScaleLimit {
            size: total as usize,
            cap: cap as usize,
        });
    }
    let mut best = 0.0f64;
    let mut a_l = vec![0usize; game.left];
    let mut a_r = vec![0usize; game.right];
    let mut tried = 0u64;
    loop {
        tried += 1;
        let v = game.value_of(&a_l, &a_r);
        if v > best {
            best = v;
            if best >= 1.0 {
                break;
            }
        }
        // advance mixed-radix counter
        let mut pos = 0usize;
        loop {
            if pos < game.left {
                a_l[pos] += 1;
                if a_l[pos] < game.n {
                    break;
                }
                a_l[pos] = 0;
            } else if pos < game.left + game.right {
                let q = pos - game.left;
                a_r[q] += 1;
                if a_r[q] < game.n / 2 {
                    break;
                }
                a_r[q] = 0;
            } else {
                return Ok(GameValueReport {
                    value: best,
                    assignments_tried: tried,
                });
            }
            pos += 1;
        }
    }
    Ok(GameValueReport {
        value: best,
        assignments_tried: tried,
    })
}
