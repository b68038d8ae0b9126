//! Two-to-one coordinate maps and the projection of slice functions onto
//! half slices, with the influence-survival check for random maps.

use crate::domain::{Domain, Word};
use crate::error::Error;
use crate::func::RealFunction;
use crate::influence::noisy_influence;
use crate::linalg::LinearMap;
use crate::rngutil::Rng;
use crate::Result;
use rand::Rng as _;
use serde::Serialize;

/// A map from `[n]` onto `[n/2]` in which every fiber has exactly two
/// elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoToOneMap {
    map: Vec<usize>,
    half: usize,
}

impl TwoToOneMap {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::Precondition("need a positive even length".into()));
        }
        let half = n / 2;
        let mut fiber_sizes = vec![0usize; half];
        for &v in &map {
            if v >= half {
                return Err(Error::Precondition("image out of range".into()));
            }
            fiber_sizes[v] += 1;
        }
        if fiber_sizes.iter().any(|&s| s != 2) {
            return Err(Error::Precondition("every fiber must have size two".into()));
        }
        Ok(TwoToOneMap { map, half })
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn half(&self) -> usize {
        self.half
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    /// The two preimages of an output index.
    pub fn fiber(&self, j: usize) -> (usize, usize) {
        let mut found = [usize::MAX; 2];
        let mut c = 0;
        for (i, &v) in self.map.iter().enumerate() {
            if v == j {
                found[c] = i;
                c += 1;
            }
        }
        (found[0], found[1])
    }

    /// Pull a half-length word up: output has `x[map[i]]` at position `i`.
    pub fn pull_up(&self, x: &Word) -> Word {
        Word(self.map.iter().map(|&j| x.0[j]).collect())
    }

    /// Push a full-length word down when it is constant on fibers.
    pub fn push_down(&self, w: &Word) -> Option<Word> {
        let mut out = vec![None::<u8>; self.half];
        for (i, &j) in self.map.iter().enumerate() {
            match out[j] {
                None => out[j] = Some(w.0[i]),
                Some(s) if s == w.0[i] => {}
                _ => return None,
            }
        }
        Some(Word(out.into_iter().map(|s| s.unwrap()).collect()))
    }
}

/// Uniform sample from the set of all 2-to-1 maps.
pub fn sample_two_to_one(n: usize, rng: &mut Rng) -> TwoToOneMap {
    assert!(n > 0 && n.is_multiple_of(2));
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    let mut map = vec![0usize; n];
    for j in 0..n / 2 {
        map[perm[2 * j]] = j;
        map[perm[2 * j + 1]] = j;
    }
    TwoToOneMap { map, half: n / 2 }
}

/// The projection of a slice function along a 2-to-1 map: a function on
/// the half slice given by `f|_(pi)(x) = f(pull_up(x))`. Requires all
/// symbol counts even.
pub fn project_function(f: &RealFunction, pi: &TwoToOneMap) -> Result<RealFunction> {
    let slice = f.domain().as_slice()?;
    let half_slice = slice.halved()?;
    let half_domain = Domain::slice(half_slice.clone());
    let words = half_domain.words()?;
    let mut values = Vec::with_capacity(words.len());
    for x in &words {
        let up = pi.pull_up(x);
        let idx = slice.index_of(&up)?;
        values.push(f.values()[idx]);
    }
    RealFunction::new(half_domain, values)
}

#[derive(Debug, Clone, Serialize)]
pub struct SurvivalReport {
    /// Noisy influence of the tracked coordinate upstairs.
    pub upstream_influence: f64,
    /// Fraction of sampled maps with downstream influence at least the
    /// survival threshold.
    pub survival_frequency: f64,
    pub threshold: f64,
    pub maps_sampled: usize,
    /// Vacuous when the upstream influence misses its own threshold.
    pub skipped: bool,
    pub pass: bool,
}

/// How often a high-noisy-influence coordinate stays influential after a
/// random 2-to-1 projection. Exact influences, sampled maps; the survival
/// threshold follows the thousandth-fraction rule of the underlying
/// argument.
#[allow(clippy::too_many_arguments)]
pub fn projected_influence_survival(
    f: &RealFunction,
    i: usize,
    noise_full: &LinearMap,
    noise_half: &LinearMap,
    tau_prime: f64,
    maps: usize,
    cap: usize,
    rng: &mut Rng,
) -> Result<SurvivalReport> {
    let slice = f.domain().as_slice()?;
    let n = slice.n();
    let upstream = noisy_influence(f, i, noise_full, cap)?;
    let threshold = tau_prime / 1000.0;
    if upstream < tau_prime {
        return Ok(SurvivalReport {
            upstream_influence: upstream,
            survival_frequency: 0.0,
            threshold,
            maps_sampled: 0,
            skipped: true,
            pass: true,
        });
    }
    let mut hits = 0usize;
    for _ in 0..maps {
        let pi = sample_two_to_one(n, rng);
        let projected = project_function(f, &pi)?;
        let downstream = noisy_influence(&projected, pi.apply(i), noise_half, cap)?;
        if downstream >= threshold {
            hits += 1;
        }
    }
    let survival_frequency = hits as f64 / maps as f64;
    Ok(SurvivalReport {
        upstream_influence: upstream,
        survival_frequency,
        threshold,
        maps_sampled: maps,
        skipped: false,
        pass: survival_frequency >= threshold,
    })
}
