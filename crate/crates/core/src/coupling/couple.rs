//! Coupling constructions between a slice side and a product side, with
//! samplers, exact joint tables, and the induced lifting operators.

use crate::coupling::pairs::{for_each_pair, segment_overlap, PairStatistics};
use crate::coupling::TupleAlphabet;
use crate::domain::counting::{binomial, multinomial};
use crate::domain::{Domain, MultiSlice, ProductSpace, Word};
use crate::error::Error;
use crate::linalg::LinearMap;
use crate::rngutil::Rng;
use crate::Result;
use nalgebra::DMatrix;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng as _;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingKind {
    /// Segment construction: sample product-side statistics, lay both
    /// words out along a common random permutation in segment order.
    Statistics,
    /// Boolean rounding: a uniform cube point has its Hamming weight
    /// rounded to `n/2` by flipping a random subset of excess coordinates.
    Monotone,
    /// Degenerate diagnostic object: the product side replays the slice
    /// word, so the product marginal is *not* the product measure.
    Identity,
}

/// A coupling of `(slice, Uniform)` with `(product, nu^n)`. Samples are
/// `(slice word, product word)` pairs.
#[derive(Debug, Clone)]
pub struct Coupling {
    pub slice: MultiSlice,
    pub product: ProductSpace,
    pub kind: CouplingKind,
}

impl Coupling {
    /// The segment coupling for the uniform measure on a slice (or, via a
    /// combined tuple alphabet, for a statistics-uniform joint law).
    pub fn statistics(slice: MultiSlice) -> Result<Coupling> {
        let product = ProductSpace::from_counts(slice.counts())?;
        Ok(Coupling {
            slice,
            product,
            kind: CouplingKind::Statistics,
        })
    }

    /// Hamming-weight rounding between the uniform cube and the balanced
    /// Boolean slice. Needs even `n`.
    pub fn boolean_monotone(n: usize) -> Result<Coupling> {
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::Precondition("monotone coupling needs even n".into()));
        }
        let slice = MultiSlice::new(vec![n / 2, n / 2])?;
        let product = ProductSpace::from_counts(slice.counts())?;
        Ok(Coupling {
            slice,
            product,
            kind: CouplingKind::Monotone,
        })
    }

    pub fn identity(slice: MultiSlice) -> Result<Coupling> {
        let product = ProductSpace::from_counts(slice.counts())?;
        Ok(Coupling {
            slice,
            product,
            kind: CouplingKind::Identity,
        })
    }

    pub fn n(&self) -> usize {
        self.slice.n()
    }

    pub fn sample(&self, rng: &mut Rng) -> (Word, Word) {
        match self.kind {
            CouplingKind::Statistics => self.sample_statistics(rng),
            CouplingKind::Monotone => self.sample_monotone(rng),
            CouplingKind::Identity => {
                let x = self.slice.sample_uniform(rng);
                (x.clone(), x)
            }
        }
    }

    fn sample_statistics(&self, rng: &mut Rng) -> (Word, Word) {
        let n = self.n();
        let m = self.slice.m();
        // product-side statistics from one iid draw
        let mut r = vec![0usize; m];
        for _ in 0..n {
            r[self.product.sample_symbol(rng) as usize] += 1;
        }
        // common permutation
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        let k = self.slice.counts();
        let mut x = vec![0u8; n];
        let mut y = vec![0u8; n];
        let mut pos = 0usize;
        for (sym, &cnt) in k.iter().enumerate() {
            for _ in 0..cnt {
                x[perm[pos]] = sym as u8;
                pos += 1;
            }
        }
        pos = 0;
        for (sym, &cnt) in r.iter().enumerate() {
            for _ in 0..cnt {
                y[perm[pos]] = sym as u8;
                pos += 1;
            }
        }
        (Word(x), Word(y))
    }

    fn sample_monotone(&self, rng: &mut Rng) -> (Word, Word) {
        let n = self.n();
        let mut x = vec![0u8; n];
        for b in x.iter_mut() {
            *b = rng.gen_range(0..2u8);
        }
        let ones: Vec<usize> = (0..n).filter(|&i| x[i] == 1).collect();
        let w = ones.len();
        let mut y = x.clone();
        let half = n / 2;
        if w > half {
            let excess = w - half;
            let chosen = sample_subset(&ones, excess, rng);
            for i in chosen {
                y[i] = 0;
            }
        } else if w < half {
            let zeros: Vec<usize> = (0..n).filter(|&i| x[i] == 0).collect();
            let chosen = sample_subset(&zeros, half - w, rng);
            for i in chosen {
                y[i] = 1;
            }
        }
        (Word(y), Word(x))
    }

    /// Exact joint probabilities over (slice index, product index).
    pub fn exact_table(&self, n_cap: usize) -> Result<JointTable> {
        if self.n() > n_cap {
            return Err(Error::ScaleLimit { size: self.n(), cap: n_cap });
        }
        match self.kind {
            CouplingKind::Statistics => self.table_statistics(),
            CouplingKind::Monotone => self.table_monotone(),
            CouplingKind::Identity => self.table_identity(),
        }
    }

    fn table_statistics(&self) -> Result<JointTable> {
        let n = self.n();
        let k = self.slice.counts();
        let m = self.slice.m();
        let support: Vec<usize> = (0..m).filter(|&c| k[c] > 0).collect();
        let slice_words = self.slice.words()?;
        let slice_size = BigUint::from(slice_words.len());
        let mut entries: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();

        // iterate compositions of n over the support symbols
        let mut r = vec![0usize; m];
        fn compositions(
            support: &[usize],
            idx: usize,
            left: usize,
            r: &mut Vec<usize>,
            visit: &mut dyn FnMut(&[usize]),
        ) {
            if idx + 1 == support.len() {
                r[support[idx]] = left;
                visit(r);
                r[support[idx]] = 0;
                return;
            }
            for take in 0..=left {
                r[support[idx]] = take;
                compositions(support, idx + 1, left - take, r, visit);
                r[support[idx]] = 0;
            }
        }
        let big_n = BigInt::from(n);
        let mut visit = |r: &[usize]| {
            // P(statistics = r) = multinomial(n; r) * prod nu_c^{r_c}
            let mut prob = BigRational::from(BigInt::from(multinomial(n, r)));
            for c in 0..m {
                if r[c] > 0 {
                    let base = BigRational::new(BigInt::from(k[c]), big_n.clone());
                    for _ in 0..r[c] {
                        prob *= base.clone();
                    }
                }
            }
            if prob.is_zero() {
                return;
            }
            let stats = segment_overlap(k, r);
            let pair_count = BigRational::from(BigInt::from(
                &slice_size * stats.placements_per_row(),
            ));
            let weight = prob / pair_count;
            for_each_pair(&stats, &slice_words, |x, y| {
                let xi = self.slice.index_of(x).expect("member word");
                let yi = self.product.index_of(y).expect("product word");
                entries
                    .entry((xi, yi))
                    .and_modify(|p| *p += weight.clone())
                    .or_insert_with(|| weight.clone());
            });
        };
        compositions(&support, 0, n, &mut r, &mut visit);

        JointTable::new(self.slice.clone(), self.product.clone(), entries)
    }

    fn table_monotone(&self) -> Result<JointTable> {
        let n = self.n();
        let half = n / 2;
        let cube = self.product.size_usize()?;
        let base = BigRational::new(BigInt::one(), BigInt::from(2u32).pow(n as u32));
        let mut entries: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
        for xi in 0..cube {
            let x = self.product.word_at(xi)?;
            let ones: Vec<usize> = (0..n).filter(|&i| x.0[i] == 1).collect();
            let w = ones.len();
            let (class, flips, to): (Vec<usize>, usize, u8) = if w >= half {
                (ones, w - half, 0)
            } else {
                ((0..n).filter(|&i| x.0[i] == 0).collect(), half - w, 1)
            };
            let choices = binomial(class.len(), flips);
            let weight = base.clone() / BigRational::from(BigInt::from(choices));
            for_each_subset(&class, flips, |subset| {
                let mut y = x.0.clone();
                for &i in subset {
                    y[i] = to;
                }
                let yi = self.slice.index_of(&Word(y)).expect("rounded word is on the slice");
                entries
                    .entry((yi, xi))
                    .and_modify(|p| *p += weight.clone())
                    .or_insert_with(|| weight.clone());
            });
        }
        JointTable::new(self.slice.clone(), self.product.clone(), entries)
    }

    fn table_identity(&self) -> Result<JointTable> {
        let words = self.slice.words()?;
        let p = BigRational::new(BigInt::one(), BigInt::from(words.len()));
        let mut entries = BTreeMap::new();
        for (xi, w) in words.iter().enumerate() {
            let yi = self.product.index_of(w)?;
            entries.insert((xi, yi), p.clone());
        }
        JointTable::new(self.slice.clone(), self.product.clone(), entries)
    }
}

fn sample_subset(pool: &[usize], take: usize, rng: &mut Rng) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pool.len()).collect();
    for i in (1..idx.len()).rev() {
        let j = rng.gen_range(0..=i);
        idx.swap(i, j);
    }
    idx[..take].iter().map(|&i| pool[i]).collect()
}

fn for_each_subset(pool: &[usize], take: usize, mut visit: impl FnMut(&[usize])) {
    if take == 0 {
        visit(&[]);
        return;
    }
    let mut combo: Vec<usize> = (0..take).collect();
    loop {
        let subset: Vec<usize> = combo.iter().map(|&i| pool[i]).collect();
        visit(&subset);
        let k = combo.len();
        let n = pool.len();
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if combo[i] < n - (k - i) {
                combo[i] += 1;
                for j in i + 1..k {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return;
            }
        }
    }
}

/// Exact joint law of a coupling, rational entries summing to one.
#[derive(Debug, Clone)]
pub struct JointTable {
    pub slice: MultiSlice,
    pub product: ProductSpace,
    entries: BTreeMap<(usize, usize), BigRational>,
    slice_words: Vec<Word>,
}

impl JointTable {
    pub fn new(
        slice: MultiSlice,
        product: ProductSpace,
        entries: BTreeMap<(usize, usize), BigRational>,
    ) -> Result<JointTable> {
        let total: BigRational = entries.values().sum();
        if total != BigRational::one() {
            return Err(Error::Precondition(format!(
                "joint table sums to {total}, expected exactly 1"
            )));
        }
        let slice_words = slice.words()?;
        Ok(JointTable {
            slice,
            product,
            entries,
            slice_words,
        })
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &BigRational)> {
        self.entries.iter()
    }

    pub fn slice_marginal(&self) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.slice_words.len()];
        for (&(x, _), p) in &self.entries {
            out[x] += p;
        }
        out
    }

    pub fn product_marginal(&self) -> BTreeMap<usize, BigRational> {
        let mut out: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (&(_, y), p) in &self.entries {
            out.entry(y)
                .and_modify(|q| *q += p)
                .or_insert_with(|| p.clone());
        }
        out
    }

    /// Exact marginal contract: slice side uniform, product side the
    /// product measure.
    pub fn check_marginals(&self) -> Result<()> {
        let uniform = BigRational::new(BigInt::one(), BigInt::from(self.slice_words.len()));
        for (x, p) in self.slice_marginal().iter().enumerate() {
            if p != &uniform {
                return Err(Error::Precondition(format!(
                    "slice marginal at {x} is {p}, expected {uniform}"
                )));
            }
        }
        for (y, p) in self.product_marginal() {
            let expect = self
                .product
                .point_measure_exact(&self.product.word_at(y)?)
                .ok_or_else(|| Error::Precondition("product weights not rational".into()))?;
            if p != expect {
                return Err(Error::Precondition(format!(
                    "product marginal at {y} is {p}, expected {expect}"
                )));
            }
        }
        Ok(())
    }

    /// Per-coordinate disagreement probabilities, exact table mode.
    pub fn zeta_per_coordinate(&self) -> Vec<f64> {
        let n = self.slice.n();
        let mut zeta = vec![BigRational::zero(); n];
        for (&(x, y), p) in &self.entries {
            let xw = &self.slice_words[x];
            let yw = self.product.word_at(y).expect("index valid");
            for i in 0..n {
                if xw.0[i] != yw.0[i] {
                    zeta[i] += p;
                }
            }
        }
        zeta.iter().map(|z| z.to_f64().unwrap_or(0.0)).collect()
    }

    pub fn zeta_max(&self) -> f64 {
        self.zeta_per_coordinate()
            .into_iter()
            .fold(0.0f64, f64::max)
    }

    /// Probability of at least `eps * n` disagreeing coordinates.
    pub fn tail_probability(&self, eps: f64) -> f64 {
        let n = self.slice.n();
        let threshold = eps * n as f64;
        let mut total = BigRational::zero();
        for (&(x, y), p) in &self.entries {
            let xw = &self.slice_words[x];
            let yw = self.product.word_at(y).expect("index valid");
            let diff = xw.0.iter().zip(&yw.0).filter(|(a, b)| a != b).count();
            if diff as f64 >= threshold - 1e-12 {
                total += p;
            }
        }
        total.to_f64().unwrap_or(0.0)
    }

    /// Whether simultaneous coordinate permutation by `perm` leaves the
    /// table invariant.
    pub fn invariant_under(&self, perm: &[usize]) -> bool {
        for (&(x, y), p) in &self.entries {
            let xp = self.slice_words[x].permute(perm);
            let yp = self.product.word_at(y).expect("index valid").permute(perm);
            let key = (
                self.slice.index_of(&xp).expect("member"),
                self.product.index_of(&yp).expect("member"),
            );
            match self.entries.get(&key) {
                Some(q) if q == p => {}
                _ => return false,
            }
        }
        true
    }

    /// The lifting operator: slice functions to product functions by
    /// conditional expectation given the product word. Rows outside the
    /// product support are zero.
    pub fn lift(&self) -> Result<LinearMap> {
        let rows = self.product.size_usize()?;
        let cols = self.slice_words.len();
        let mut mat = DMatrix::zeros(rows, cols);
        let marg = self.product_marginal();
        for (&(x, y), p) in &self.entries {
            let denom = marg.get(&y).expect("entry implies marginal");
            let w = (p / denom).to_f64().unwrap_or(0.0);
            mat[(y, x)] += w;
        }
        LinearMap::new(
            Domain::slice(self.slice.clone()),
            Domain::product(self.product.clone()),
            mat,
        )
    }

    /// The adjoint lift: product functions to slice functions by
    /// conditional expectation given the slice word.
    pub fn lift_adjoint(&self) -> Result<LinearMap> {
        let rows = self.slice_words.len();
        let cols = self.product.size_usize()?;
        let mut mat = DMatrix::zeros(rows, cols);
        let marg = self.slice_marginal();
        for (&(x, y), p) in &self.entries {
            let w = (p / &marg[x]).to_f64().unwrap_or(0.0);
            mat[(x, y)] += w;
        }
        LinearMap::new(
            Domain::product(self.product.clone()),
            Domain::slice(self.slice.clone()),
            mat,
        )
    }

    /// Expectation of `g(x, y)` under the joint law.
    pub fn expect(&self, mut g: impl FnMut(&Word, &Word) -> f64) -> f64 {
        let mut acc = 0.0;
        for (&(x, y), p) in &self.entries {
            let yw = self.product.word_at(y).expect("index valid");
            acc += g(&self.slice_words[x], &yw) * p.to_f64().unwrap_or(0.0);
        }
        acc
    }

    /// Marginalize a tuple-alphabet coupling onto one component, producing
    /// the coupling of that component's slice with its product side.
    pub fn component(&self, alphabet: &TupleAlphabet, i: usize) -> Result<JointTable> {
        let mi = alphabet.component_sizes()[i];
        // component slice counts from the combined counts
        let mut k = vec![0usize; mi];
        for (c, &cnt) in self.slice.counts().iter().enumerate() {
            k[alphabet.decode(c as u8)[i] as usize] += cnt;
        }
        let sub_slice = MultiSlice::new(k.clone())?;
        let sub_product = ProductSpace::from_counts(&k)?;
        let mut entries: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
        for (&(x, y), p) in &self.entries {
            let xw = alphabet.project(&self.slice_words[x], i);
            let yw = alphabet.project(&self.product.word_at(y)?, i);
            let key = (sub_slice.index_of(&xw)?, sub_product.index_of(&yw)?);
            entries
                .entry(key)
                .and_modify(|q| *q += p)
                .or_insert_with(|| p.clone());
        }
        JointTable::new(sub_slice, sub_product, entries)
    }

    /// Pair statistics classifier used by sub-distribution logic.
    pub fn pair_statistics_of_entry(&self, x: usize, y: usize) -> PairStatistics {
        let yw = self.product.word_at(y).expect("index valid");
        PairStatistics::of(&self.slice_words[x], &yw, self.slice.m(), self.product.m())
    }

    pub fn slice_words(&self) -> &[Word] {
        &self.slice_words
    }

    pub fn get(&self, x: usize, y: usize) -> BigRational {
        self.entries
            .get(&(x, y))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn abs_difference(&self, other: &JointTable) -> BigRational {
        let mut keys: std::collections::BTreeSet<(usize, usize)> = BTreeMap::keys(&self.entries)
            .copied()
            .collect();
        keys.extend(other.entries.keys().copied());
        let mut acc = BigRational::zero();
        for k in keys {
            acc += (self.get(k.0, k.1) - other.get(k.0, k.1)).abs();
        }
        acc
    }
}
