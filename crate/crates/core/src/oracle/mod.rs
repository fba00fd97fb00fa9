//! Brute-force dense realization of the Schur–Weyl picture in exact rational
//! arithmetic: permutation operators, isotypical projectors, partial traces,
//! the permutation twirl and the depolarising channel on `(C^d)^{⊗n}`.
//!
//! Everything here is ground truth for [`crate::spectral`]; nothing is
//! derived from LR coefficients. Operators are immutable once built and can
//! be shared across threads.

mod operator;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub use operator::TensorOperator;
pub(crate) use operator::Words;

use crate::error::{Error, Result};
use crate::frames::{dim_sym, YoungFrame};
use crate::perm::{
    character, cycle_type, enumerate_group_capped, factorial, CycleType, Permutation,
};
use crate::rational::ExactScalar;

/// Size limits for the dense oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct OracleCaps {
    /// Largest matrix dimension `d^n`.
    pub max_dim: usize,
    /// Largest `n` for loops over all of `S_n`.
    pub max_group_n: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            max_dim: 6561,
            max_group_n: 8,
        }
    }
}

impl OracleCaps {
    /// Default caps with the `S_n` loop limit raised to `n`.
    pub fn with_group_n(n: usize) -> Self {
        OracleCaps {
            max_group_n: n,
            ..OracleCaps::default()
        }
    }

    pub fn check_dim(&self, d: usize, n: usize) -> Result<()> {
        let dim = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if dim > self.max_dim as u128 {
            return Err(Error::CapExceeded {
                what: "operator dimension d^n",
                value: usize::try_from(dim).unwrap_or(usize::MAX),
                cap: self.max_dim,
            });
        }
        Ok(())
    }

    pub fn check_group(&self, n: usize) -> Result<()> {
        if n > self.max_group_n {
            return Err(Error::CapExceeded {
                what: "sites n for an S_n loop",
                value: n,
                cap: self.max_group_n,
            });
        }
        Ok(())
    }
}

/// The 0/1 matrix `B(τ)` sending basis word `x` to `τ·x`.
pub fn perm_operator(tau: &Permutation, d: usize, caps: &OracleCaps) -> Result<TensorOperator> {
    let n = tau.len();
    caps.check_dim(d, n)?;
    let words = Words::new(d, n);
    TensorOperator::from_entries(
        d,
        n,
        (0..words.dim()).map(|x| {
            let y = words.index(&tau.act_on_word(&words.digits(x)));
            (y, x, BigRational::one())
        }),
    )
}

/// Letter counts of a word.
fn word_type(word: &[u8], d: usize) -> Vec<usize> {
    let mut counts = vec![0; d];
    for &x in word {
        counts[x as usize] += 1;
    }
    counts
}

/// All isotypical projectors of `(C^d)^{⊗n}`, in [`crate::enumerate_frames`]
/// order, from the central idempotents
/// `P_λ = (dim F_λ / n!) Σ_τ χ_λ(τ) B(τ)`.
///
/// `P_λ` commutes with every `B(σ)`, so only one column per letter-count
/// class is summed over `S_n`; the other columns are copies moved by `σ`.
pub fn isotypical_projectors(
    d: usize,
    n: usize,
    caps: &OracleCaps,
) -> Result<Vec<(YoungFrame, TensorOperator)>> {
    let frames = crate::frames::enumerate_frames(d, n)?;
    projector_family(d, n, caps, &frames)
}

/// `P_λ` for a single frame; `d` is the frame's row budget.
pub fn isotypical_projector(lambda: &YoungFrame, caps: &OracleCaps) -> Result<TensorOperator> {
    let mut family = projector_family(lambda.d(), lambda.n(), caps, std::slice::from_ref(lambda))?;
    Ok(family.pop().expect("one frame requested").1)
}

fn projector_family(
    d: usize,
    n: usize,
    caps: &OracleCaps,
    frames: &[YoungFrame],
) -> Result<Vec<(YoungFrame, TensorOperator)>> {
    caps.check_dim(d, n)?;
    caps.check_group(n)?;
    let words = Words::new(d, n);
    let dim = words.dim();

    let classes = CycleType::all(n);
    let class_index: HashMap<CycleType, usize> = classes
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, c)| (c, i))
        .collect();
    let nc = classes.len();

    // One sorted representative per letter-count class.
    let mut canonical: Vec<Vec<u8>> = Vec::new();
    let mut canonical_of_type: HashMap<Vec<usize>, usize> = HashMap::new();
    for x in 0..dim {
        let w = words.digits(x);
        if w.windows(2).all(|p| p[0] <= p[1]) {
            canonical_of_type.insert(word_type(&w, d), canonical.len());
            canonical.push(w);
        }
    }

    // counts[c][y * nc + class] = #{τ in class : τ·canonical[c] = y}
    let mut counts = vec![vec![0u32; dim * nc]; canonical.len()];
    for tau in enumerate_group_capped(n, caps.max_group_n)? {
        let class = class_index[&cycle_type(&tau)];
        let place: Vec<usize> = (0..n).map(|i| words.place[tau.image(i)]).collect();
        for (c, word) in canonical.iter().enumerate() {
            let y: usize = word.iter().zip(&place).map(|(&x, &p)| x as usize * p).sum();
            counts[c][y * nc + class] += 1;
        }
    }

    // For each word x: its class representative and a σ with σ·rep = x.
    let movers: Vec<(usize, Vec<usize>)> = (0..dim)
        .map(|x| {
            let w = words.digits(x);
            let t = word_type(&w, d);
            let c = canonical_of_type[&t];
            let mut next_slot: Vec<usize> = Vec::with_capacity(d);
            let mut start = 0;
            for &count in &t {
                next_slot.push(start);
                start += count;
            }
            let mut sigma = vec![0; n];
            for (pos, &letter) in w.iter().enumerate() {
                sigma[next_slot[letter as usize]] = pos;
                next_slot[letter as usize] += 1;
            }
            (c, sigma)
        })
        .collect();

    let order = BigInt::from(factorial(n));
    frames
        .iter()
        .map(|lambda| {
            if lambda.n() != n {
                return Err(Error::SizeMismatch(format!(
                    "frame {lambda} is not of size {n}"
                )));
            }
            let chi: Vec<i64> = classes
                .iter()
                .map(|c| character(lambda, c))
                .collect::<Result<_>>()?;
            let dim_f = BigInt::from(dim_sym(lambda));
            let columns: Vec<Vec<(Vec<u8>, i64)>> = counts
                .iter()
                .map(|table| {
                    (0..dim)
                        .filter_map(|y| {
                            let s: i64 = (0..nc).map(|k| table[y * nc + k] as i64 * chi[k]).sum();
                            (s != 0).then(|| (words.digits(y), s))
                        })
                        .collect()
                })
                .collect();
            let mut rows = vec![std::collections::BTreeMap::new(); dim];
            for (x, (c, sigma)) in movers.iter().enumerate() {
                for (y_digits, s) in &columns[*c] {
                    let moved: usize = y_digits
                        .iter()
                        .enumerate()
                        .map(|(i, &letter)| letter as usize * words.place[sigma[i]])
                        .sum();
                    rows[moved].insert(x, &dim_f * BigInt::from(*s));
                }
            }
            Ok((
                lambda.clone(),
                TensorOperator::from_numerators(d, n, order.clone(), rows),
            ))
        })
        .collect()
}

/// `tr_B(A)` over the 0-based sites in `sites`.
pub fn partial_trace(a: &TensorOperator, sites: &[usize]) -> Result<TensorOperator> {
    a.partial_trace(sites)
}

/// `A ⊗ π^{⊗k}`, the new sites appended after the existing ones.
pub fn tensor_with_maximally_mixed(
    a: &TensorOperator,
    k: usize,
    caps: &OracleCaps,
) -> Result<TensorOperator> {
    caps.check_dim(a.d(), a.n() + k)?;
    let sites: Vec<usize> = (a.n()..a.n() + k).collect();
    a.insert_maximally_mixed(&sites)
}

/// `A ⊗ 𝟙^{⊗k}`, the new sites appended after the existing ones.
pub fn tensor_with_identity(
    a: &TensorOperator,
    k: usize,
    caps: &OracleCaps,
) -> Result<TensorOperator> {
    caps.check_dim(a.d(), a.n() + k)?;
    let sites: Vec<usize> = (a.n()..a.n() + k).collect();
    a.insert_identity(&sites)
}

/// `S̄_n(A) = (1/n!) Σ_τ B(τ) A B(τ⁻¹)`.
///
/// Conjugation by `B(τ)` moves entry `(x, y)` to `(τx, τy)`, and every pair
/// in an `S_n`-orbit is hit by the same number of permutations, so the twirl
/// replaces each entry by the mean of `A` over its orbit of position-pairs.
/// An orbit is identified by the multiset of column pairs `(x_i, y_i)`.
pub fn twirl(a: &TensorOperator, caps: &OracleCaps) -> Result<TensorOperator> {
    let (d, n) = (a.d(), a.n());
    caps.check_dim(d, n)?;
    let words = a.words();
    let mut sums: HashMap<Vec<u16>, BigInt> = HashMap::new();
    for (r, c, v) in a.numerators() {
        let x = words.digits(r);
        let y = words.digits(c);
        let mut key: Vec<u16> = x
            .iter()
            .zip(&y)
            .map(|(&p, &q)| p as u16 * d as u16 + q as u16)
            .collect();
        key.sort_unstable();
        *sums.entry(key).or_insert_with(BigInt::zero) += v;
    }
    let order = factorial(n);
    let mut rows = vec![std::collections::BTreeMap::new(); words.dim()];
    for (key, sum) in sums {
        if sum.is_zero() {
            continue;
        }
        let mut multiplicity: Vec<(u16, usize)> = Vec::new();
        for &code in &key {
            match multiplicity.last_mut() {
                Some((c, m)) if *c == code => *m += 1,
                _ => multiplicity.push((code, 1)),
            }
        }
        let stabilizer: u128 = multiplicity.iter().map(|&(_, m)| factorial(m)).product();
        // entry = sum / orbit_size = sum · stabilizer / n!
        let numer = sum * BigInt::from(stabilizer);
        let mut arrangement = vec![0u16; n];
        for_each_arrangement(&mut multiplicity, &mut arrangement, 0, &mut |codes| {
            let x: Vec<u8> = codes.iter().map(|&c| (c / d as u16) as u8).collect();
            let y: Vec<u8> = codes.iter().map(|&c| (c % d as u16) as u8).collect();
            rows[words.index(&x)].insert(words.index(&y), numer.clone());
        });
    }
    Ok(TensorOperator::from_numerators(
        d,
        n,
        a.denom() * BigInt::from(order),
        rows,
    ))
}

fn for_each_arrangement(
    remaining: &mut [(u16, usize)],
    out: &mut [u16],
    pos: usize,
    visit: &mut dyn FnMut(&[u16]),
) {
    if pos == out.len() {
        visit(out);
        return;
    }
    for i in 0..remaining.len() {
        if remaining[i].1 == 0 {
            continue;
        }
        remaining[i].1 -= 1;
        out[pos] = remaining[i].0;
        for_each_arrangement(remaining, out, pos + 1, visit);
        remaining[i].1 += 1;
    }
}

/// `S̄_n(A)` as the literal average of `B(τ) A B(τ⁻¹)` over all of `S_n`;
/// `n!` passes over `A`. Cross-check for [`twirl`].
pub fn twirl_group_sum(a: &TensorOperator, caps: &OracleCaps) -> Result<TensorOperator> {
    let (d, n) = (a.d(), a.n());
    caps.check_dim(d, n)?;
    caps.check_group(n)?;
    let words = a.words();
    let mut rows = vec![std::collections::BTreeMap::new(); words.dim()];
    for tau in enumerate_group_capped(n, caps.max_group_n)? {
        let moved: Vec<usize> = (0..words.dim())
            .map(|x| words.index(&tau.act_on_word(&words.digits(x))))
            .collect();
        for (r, c, v) in a.numerators() {
            *rows[moved[r]].entry(moved[c]).or_insert_with(BigInt::zero) += v;
        }
    }
    Ok(TensorOperator::from_numerators(
        d,
        n,
        a.denom() * BigInt::from(factorial(n)),
        rows,
    ))
}

fn check_probability(q: &ExactScalar) -> Result<()> {
    if q.is_negative() || *q > BigRational::one() {
        return Err(Error::Domain {
            value: q.to_string(),
            domain: "[0, 1]",
        });
    }
    Ok(())
}

/// `N_q^{⊗n}(A)` with `N_q = (1 − q)·Id + q·T` and `T(a) = tr(a)·π`, applied
/// one site at a time. Expanding the product gives the subset sum
/// `Σ_S q^{|S|}(1−q)^{n−|S|} tr_S(A) ⊗ π_S` of [`depolarise_subsets`].
pub fn depolarise_n(
    a: &TensorOperator,
    q: &ExactScalar,
    caps: &OracleCaps,
) -> Result<TensorOperator> {
    check_probability(q)?;
    caps.check_dim(a.d(), a.n())?;
    let keep = BigRational::one() - q;
    let mut current = a.clone();
    for site in 0..a.n() {
        let replaced = current
            .partial_trace(&[site])?
            .insert_maximally_mixed(&[site])?;
        current = current.scale(&keep).add(&replaced.scale(q))?;
    }
    Ok(current)
}

/// `Σ_{S ⊆ [n]} q^{|S|}(1−q)^{n−|S|} · tr_S(A) ⊗ π_S`, with `π_S` put back
/// at the positions in `S`; `2^n` terms.
pub fn depolarise_subsets(
    a: &TensorOperator,
    q: &ExactScalar,
    caps: &OracleCaps,
) -> Result<TensorOperator> {
    check_probability(q)?;
    let n = a.n();
    caps.check_dim(a.d(), n)?;
    caps.check_group(n)?;
    let keep = BigRational::one() - q;
    let mut total = TensorOperator::zero(a.d(), n);
    for mask in 0u32..(1u32 << n) {
        let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let weight = num_traits::pow(q.clone(), subset.len())
            * num_traits::pow(keep.clone(), n - subset.len());
        if weight.is_zero() {
            continue;
        }
        let term = a.partial_trace(&subset)?.insert_maximally_mixed(&subset)?;
        total = total.add(&term.scale(&weight))?;
    }
    Ok(total)
}

/// `tr(P · A)`.
pub fn overlap(projector: &TensorOperator, a: &TensorOperator) -> Result<ExactScalar> {
    projector.overlap(a)
}

/// All isotypical projectors for one `(d, n)`, built once and queried by
/// frame.
#[derive(Clone, Debug)]
pub struct SchurWeylOracle {
    d: usize,
    n: usize,
    caps: OracleCaps,
    projectors: Vec<(YoungFrame, TensorOperator)>,
}

impl SchurWeylOracle {
    pub fn new(d: usize, n: usize, caps: OracleCaps) -> Result<Self> {
        let projectors = isotypical_projectors(d, n, &caps)?;
        Ok(SchurWeylOracle {
            d,
            n,
            caps,
            projectors,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn caps(&self) -> &OracleCaps {
        &self.caps
    }

    pub fn frames(&self) -> impl Iterator<Item = &YoungFrame> {
        self.projectors.iter().map(|(f, _)| f)
    }

    pub fn projectors(&self) -> &[(YoungFrame, TensorOperator)] {
        &self.projectors
    }

    pub fn projector(&self, lambda: &YoungFrame) -> Result<&TensorOperator> {
        self.projectors
            .iter()
            .find(|(f, _)| f == lambda)
            .map(|(_, p)| p)
            .ok_or_else(|| {
                Error::SizeMismatch(format!(
                    "frame {lambda} is not in YF_{{{},{}}}",
                    self.d, self.n
                ))
            })
    }

    /// `π_λ = P_λ / tr P_λ`.
    pub fn flat_state(&self, lambda: &YoungFrame) -> Result<TensorOperator> {
        let p = self.projector(lambda)?;
        Ok(p.scale(&(BigRational::one() / p.trace())))
    }

    /// `tr(P_{λ'} · A)`.
    pub fn overlap(&self, lambda_prime: &YoungFrame, a: &TensorOperator) -> Result<ExactScalar> {
        self.projector(lambda_prime)?.overlap(a)
    }

    /// `tr(P_{λ'} · A)` for every `λ'`, in frame order.
    pub fn spectrum(&self, a: &TensorOperator) -> Result<Vec<(YoungFrame, ExactScalar)>> {
        self.projectors
            .iter()
            .map(|(f, p)| Ok((f.clone(), p.overlap(a)?)))
            .collect()
    }

    /// `tr_B(P_λ) ⊗ 𝟙_B` with `B` the last `k` sites.
    pub fn traced_with_identity(&self, lambda: &YoungFrame, k: usize) -> Result<TensorOperator> {
        let sites = self.last_sites(k)?;
        self.projector(lambda)?
            .partial_trace(&sites)?
            .insert_identity(&sites)
    }

    /// `tr_B(P_λ) ⊗ π_B` with `B` the last `k` sites.
    pub fn traced_with_mixed(&self, lambda: &YoungFrame, k: usize) -> Result<TensorOperator> {
        let sites = self.last_sites(k)?;
        self.projector(lambda)?
            .partial_trace(&sites)?
            .insert_maximally_mixed(&sites)
    }

    fn last_sites(&self, k: usize) -> Result<Vec<usize>> {
        if k > self.n {
            return Err(Error::SizeMismatch(format!(
                "cannot trace {k} of {} sites",
                self.n
            )));
        }
        Ok((self.n - k..self.n).collect())
    }
}

/// A random trace-one PSD operator `Σ_j v_j v_jᵀ / tr` with small integer
/// vectors `v_j`, for sampled channel checks.
pub fn random_density_operator(
    d: usize,
    n: usize,
    rank: usize,
    rng: &mut impl Rng,
    caps: &OracleCaps,
) -> Result<TensorOperator> {
    caps.check_dim(d, n)?;
    let dim = d.pow(n as u32);
    let mut acc = vec![std::collections::BTreeMap::new(); dim];
    for _ in 0..rank.max(1) {
        let v: Vec<i64> = (0..dim).map(|_| rng.gen_range(-2..=2)).collect();
        for (i, &a) in v.iter().enumerate().filter(|(_, a)| **a != 0) {
            for (j, &b) in v.iter().enumerate().filter(|(_, b)| **b != 0) {
                *acc[i].entry(j).or_insert_with(BigInt::zero) += BigInt::from(a * b);
            }
        }
    }
    let op = TensorOperator::from_numerators(d, n, BigInt::one(), acc);
    let tr = op.trace();
    if tr.is_zero() {
        return Ok(TensorOperator::identity(d, n)
            .scale(&BigRational::new(BigInt::one(), BigInt::from(dim))));
    }
    Ok(op.scale(&(BigRational::one() / tr)))
}

/// Whether projectors for `(d, n)` can be built under `caps`.
pub fn within_caps(d: usize, n: usize, caps: &OracleCaps) -> bool {
    caps.check_dim(d, n).is_ok() && caps.check_group(n).is_ok()
}
