//! Symmetric-group permutations, cycle types and irreducible characters.
//!
//! Characters are evaluated on cycle types with the Murnaghan–Nakayama rule.
//! Results are memoized in a process-wide table keyed by `(λ, cycle type)`.
//! The table sits behind an `RwLock`, so concurrent readers and writers are
//! safe; the lock is never held across the recursion.

use std::collections::HashMap;
use std::sync::{LazyLock, RwLock};

use crate::error::{Error, Result};
use crate::frames::{Partition, Shape};

/// Default largest `n` for which [`enumerate_group`] will iterate `S_n`.
pub const DEFAULT_GROUP_CAP: usize = 10;

/// A permutation of `{0, …, n−1}` in one-line notation (0-based images).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// From 0-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection on 0..{n}"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// From the usual 1-based one-line notation, e.g. `[2, 1, 3]`.
    pub fn from_one_line(one_line: &[usize]) -> Result<Self> {
        if one_line.contains(&0) {
            return Err(Error::InvalidPermutation(
                "one-line notation is 1-based".to_string(),
            ));
        }
        Permutation::from_images(one_line.iter().map(|&i| i - 1).collect())
    }

    /// A transposition of sites `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        if a >= n || b >= n {
            return Err(Error::InvalidPermutation(format!(
                "transposition ({a} {b}) outside 0..{n}"
            )));
        }
        images.swap(a, b);
        Ok(Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(
            self.len(),
            other.len(),
            "composing permutations of different degree"
        );
        Permutation {
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        }
    }

    /// The letter at position `i` of `word` moves to position `τ(i)`.
    pub fn act_on_word<T: Copy + Default>(&self, word: &[T]) -> Vec<T> {
        let mut out = vec![T::default(); word.len()];
        for (i, &letter) in word.iter().enumerate() {
            out[self.images[i]] = letter;
        }
        out
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }
}

/// The conjugacy class of a permutation: its cycle lengths as a partition
/// of `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType(Partition);

impl CycleType {
    pub fn new(lengths: Vec<usize>) -> Result<Self> {
        let mut lengths = lengths;
        lengths.retain(|&l| l > 0);
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        Ok(CycleType(Partition::new(lengths)?))
    }

    pub fn identity(n: usize) -> Self {
        CycleType(Partition::new(vec![1; n]).expect("all ones is a partition"))
    }

    pub fn partition(&self) -> &Partition {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.size()
    }

    pub fn cycles(&self) -> usize {
        self.0.length()
    }

    /// `(−1)^{n − #cycles}`.
    pub fn sign(&self) -> i64 {
        if (self.n() - self.cycles()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Size of the centralizer, `z_ρ = ∏ i^{m_i} m_i!`.
    pub fn centralizer_order(&self) -> u128 {
        let mut counts: HashMap<usize, u32> = HashMap::new();
        for &p in self.0.parts() {
            *counts.entry(p).or_default() += 1;
        }
        counts
            .into_iter()
            .map(|(part, m)| (part as u128).pow(m) * factorial(m as usize))
            .product()
    }

    /// Number of permutations with this cycle type.
    pub fn class_size(&self) -> u128 {
        factorial(self.n()) / self.centralizer_order()
    }

    /// All cycle types of `S_n`, in decreasing lexicographic order.
    pub fn all(n: usize) -> Vec<CycleType> {
        Partition::all(n).into_iter().map(CycleType).collect()
    }
}

impl Shape for CycleType {
    fn rows(&self) -> &[usize] {
        self.0.rows()
    }
}

pub fn cycle_type(tau: &Permutation) -> CycleType {
    CycleType::new(tau.cycle_lengths()).expect("sorted cycle lengths form a partition")
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// All `n!` permutations in lexicographic order of their one-line notation.
#[derive(Clone, Debug)]
pub struct GroupIter {
    next: Option<Vec<usize>>,
}

impl Iterator for GroupIter {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation { images: current })
    }
}

fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Iterates `S_n` with the default cap of [`DEFAULT_GROUP_CAP`].
pub fn enumerate_group(n: usize) -> Result<GroupIter> {
    enumerate_group_capped(n, DEFAULT_GROUP_CAP)
}

pub fn enumerate_group_capped(n: usize, cap: usize) -> Result<GroupIter> {
    if n > cap {
        return Err(Error::CapExceeded {
            what: "symmetric group degree n",
            value: n,
            cap,
        });
    }
    Ok(GroupIter {
        next: Some((0..n).collect()),
    })
}

type CharKey = (Vec<usize>, Vec<usize>);

static CHARACTERS: LazyLock<RwLock<HashMap<CharKey, i64>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// `χ_λ(ρ)` for `λ ⊢ n` and a cycle type `ρ ⊢ n`.
pub fn character(lambda: &impl Shape, class: &CycleType) -> Result<i64> {
    if lambda.size() != class.n() {
        return Err(Error::SizeMismatch(format!(
            "χ_λ needs |λ| = |ρ|, got {} and {}",
            lambda.size(),
            class.n()
        )));
    }
    Ok(mn_character(lambda.parts(), class.partition().parts()))
}

fn mn_character(lambda: &[usize], rho: &[usize]) -> i64 {
    if rho.is_empty() {
        return 1;
    }
    let key = (lambda.to_vec(), rho.to_vec());
    if let Some(&v) = CHARACTERS
        .read()
        .expect("character memo poisoned")
        .get(&key)
    {
        return v;
    }

    // Beta-set (first-column hook lengths) form: removing a border strip of
    // length r moves one bead from b to b − r onto an empty position, with
    // sign (−1)^{beads strictly between}.
    let len = lambda.len();
    let beta: Vec<usize> = lambda
        .iter()
        .enumerate()
        .map(|(i, &part)| part + (len - 1 - i))
        .collect();
    let strip = rho[0];
    let rest = &rho[1..];
    let mut total = 0i64;
    for (idx, &b) in beta.iter().enumerate() {
        if b < strip {
            continue;
        }
        let target = b - strip;
        if beta.contains(&target) {
            continue;
        }
        let between = beta.iter().filter(|&&x| x > target && x < b).count();
        let sign = if between % 2 == 0 { 1 } else { -1 };
        let mut moved = beta.clone();
        moved[idx] = target;
        moved.sort_unstable_by(|a, b| b.cmp(a));
        let reduced: Vec<usize> = moved
            .iter()
            .enumerate()
            .map(|(i, &x)| x - (len - 1 - i))
            .filter(|&p| p > 0)
            .collect();
        total += sign * mn_character(&reduced, rest);
    }

    CHARACTERS
        .write()
        .expect("character memo poisoned")
        .insert(key, total);
    total
}
