//! Littlewood-Richardson coefficients.
//!
//! [`lr_coefficient`] counts LR tableaux by backtracking; every counted
//! filling can be materialized as an [`LrTableau`] witness.
//! [`lr_via_characters`] computes the same number as the multiplicity of
//! `F_μ ⊗ F_ν` in the restriction of `F_λ` to `S_l × S_k`, using only
//! characters, and serves as an independent check.

use std::collections::HashMap;
use std::fmt;
use std::sync::{LazyLock, RwLock};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::frames::{frames_of, Partition, Shape, YoungFrame};
use crate::perm::{character, factorial, CycleType};

/// Default largest `|λ|` accepted by [`lr_via_characters`].
pub const DEFAULT_CHARACTER_CAP: usize = 10;

/// The skew diagram `outer / inner`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewShape {
    outer: Partition,
    inner: Partition,
}

impl SkewShape {
    pub fn new(outer: &impl Shape, inner: &impl Shape) -> Result<Self> {
        let outer = Partition::new(outer.parts().to_vec())?;
        let inner = Partition::new(inner.parts().to_vec())?;
        if inner.length() > outer.length()
            || (0..inner.length()).any(|i| inner.row(i) > outer.row(i))
        {
            return Err(Error::InvalidFrame(format!(
                "({inner}) does not fit inside ({outer})"
            )));
        }
        Ok(SkewShape { outer, inner })
    }

    pub fn outer(&self) -> &Partition {
        &self.outer
    }

    pub fn inner(&self) -> &Partition {
        &self.inner
    }

    pub fn cell_count(&self) -> usize {
        self.outer.size() - self.inner.size()
    }

    /// Skew cells `(row, column)` in reading order: rows top to bottom, each
    /// row right to left.
    fn reading_order(&self) -> Vec<(usize, usize)> {
        (0..self.outer.length())
            .flat_map(|r| {
                (self.inner.row(r)..self.outer.row(r))
                    .rev()
                    .map(move |c| (r, c))
            })
            .collect()
    }
}

/// A filling of a skew shape counted by the LR rule: rows weakly increase,
/// columns strictly increase, and the reverse reading word is a lattice word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LrTableau {
    skew: SkewShape,
    /// `filling[r]` holds the entries of row `r`'s skew cells, left to right.
    filling: Vec<Vec<usize>>,
}

impl LrTableau {
    pub fn skew(&self) -> &SkewShape {
        &self.skew
    }

    pub fn filling(&self) -> &[Vec<usize>] {
        &self.filling
    }

    /// Entries read right to left, top to bottom.
    pub fn reading_word(&self) -> Vec<usize> {
        self.filling
            .iter()
            .flat_map(|row| row.iter().rev().copied())
            .collect()
    }

    /// Multiplicity of each entry `1, 2, …`.
    pub fn content(&self) -> Vec<usize> {
        let mut counts = Vec::new();
        for v in self.reading_word() {
            if counts.len() < v {
                counts.resize(v, 0);
            }
            counts[v - 1] += 1;
        }
        counts
    }

    /// Re-checks every LR condition from scratch.
    pub fn is_valid(&self) -> bool {
        let outer = &self.skew.outer;
        let inner = &self.skew.inner;
        let cell = |r: usize, c: usize| -> Option<usize> {
            let start = inner.row(r);
            if c < start || c >= outer.row(r) {
                None
            } else {
                self.filling
                    .get(r)
                    .and_then(|row| row.get(c - start).copied())
            }
        };
        for r in 0..outer.length() {
            let row = match self.filling.get(r) {
                Some(row) => row,
                None => return false,
            };
            if row.len() != outer.row(r) - inner.row(r) || row.contains(&0) {
                return false;
            }
            if row.windows(2).any(|w| w[0] > w[1]) {
                return false;
            }
            for c in inner.row(r)..outer.row(r) {
                if r > 0 {
                    if let (Some(above), Some(here)) = (cell(r - 1, c), cell(r, c)) {
                        if above >= here {
                            return false;
                        }
                    }
                }
            }
        }
        let mut counts: Vec<usize> = Vec::new();
        for v in self.reading_word() {
            if counts.len() < v {
                counts.resize(v, 0);
            }
            counts[v - 1] += 1;
            if v > 1 && counts[v - 1] > counts[v - 2] {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for LrTableau {
    /// One line per row; cells of the inner shape print as `.`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, row) in self.filling.iter().enumerate() {
            if r > 0 {
                writeln!(f)?;
            }
            let dots = self.skew.inner.row(r);
            let cells: Vec<String> = std::iter::repeat_n(".".to_string(), dots)
                .chain(row.iter().map(|v| v.to_string()))
                .collect();
            f.write_str(&cells.join(" "))?;
        }
        Ok(())
    }
}

struct Search<'a> {
    outer: &'a [usize],
    inner: &'a [usize],
    content: &'a [usize],
    order: Vec<(usize, usize)>,
    grid: Vec<Vec<usize>>,
    counts: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, pos: usize, visit: &mut dyn FnMut(&[Vec<usize>])) {
        if pos == self.order.len() {
            visit(&self.grid);
            return;
        }
        let (r, c) = self.order[pos];
        let mut hi = self.content.len();
        if c + 1 < self.outer[r] {
            hi = hi.min(self.grid[r][c + 1]);
        }
        // Entries in row r never exceed r + 1 in an LR tableau.
        hi = hi.min(r + 1);
        let mut lo = 1;
        if r > 0 && c >= self.inner.get(r - 1).copied().unwrap_or(0) {
            lo = self.grid[r - 1][c] + 1;
        }
        for v in lo..=hi {
            let idx = v - 1;
            if self.counts[idx] >= self.content[idx] {
                continue;
            }
            if idx > 0 && self.counts[idx] + 1 > self.counts[idx - 1] {
                continue;
            }
            self.counts[idx] += 1;
            self.grid[r][c] = v;
            self.run(pos + 1, visit);
            self.grid[r][c] = 0;
            self.counts[idx] -= 1;
        }
    }
}

fn for_each_lr_filling(
    lambda: &impl Shape,
    mu: &impl Shape,
    nu: &impl Shape,
    mut visit: impl FnMut(&[Vec<usize>]),
) {
    if lambda.size() != mu.size() + nu.size() {
        return;
    }
    let Ok(skew) = SkewShape::new(lambda, mu) else {
        return;
    };
    let outer = lambda.parts();
    let inner = mu.parts();
    let mut search = Search {
        outer,
        inner,
        content: nu.parts(),
        order: skew.reading_order(),
        grid: outer.iter().map(|&w| vec![0; w]).collect(),
        counts: vec![0; nu.length()],
    };
    search.run(0, &mut visit);
}

type LrKey = (Vec<usize>, Vec<usize>, Vec<usize>);

static LR_CACHE: LazyLock<RwLock<HashMap<LrKey, u64>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// `c^λ_{μν}`: the number of LR tableaux of shape `λ/μ` with content `ν`.
/// Zero when the sizes do not add up or `μ ⊄ λ`. Results are cached (the
/// cache is safe for concurrent use).
pub fn lr_coefficient(lambda: &impl Shape, mu: &impl Shape, nu: &impl Shape) -> u64 {
    if lambda.size() != mu.size() + nu.size() {
        return 0;
    }
    let key = (
        lambda.parts().to_vec(),
        mu.parts().to_vec(),
        nu.parts().to_vec(),
    );
    if let Some(&c) = LR_CACHE.read().expect("LR cache poisoned").get(&key) {
        return c;
    }
    let mut count = 0u64;
    for_each_lr_filling(lambda, mu, nu, |_| count += 1);
    LR_CACHE
        .write()
        .expect("LR cache poisoned")
        .insert(key, count);
    count
}

/// Every LR tableau counted by [`lr_coefficient`].
pub fn lr_tableaux(lambda: &impl Shape, mu: &impl Shape, nu: &impl Shape) -> Vec<LrTableau> {
    let mut out = Vec::new();
    let Ok(skew) = SkewShape::new(lambda, mu) else {
        return out;
    };
    for_each_lr_filling(lambda, mu, nu, |grid| {
        let filling = grid
            .iter()
            .enumerate()
            .map(|(r, row)| row[skew.inner.row(r)..].to_vec())
            .collect();
        out.push(LrTableau {
            skew: skew.clone(),
            filling,
        });
    });
    out
}

/// `c^λ_{μν}` as the character inner product
/// `(1/(l! k!)) Σ_{σ∈S_l, τ∈S_k} χ_μ(σ) χ_ν(τ) χ_λ(σ × τ)`,
/// summed class by class. `|λ|` is capped at [`DEFAULT_CHARACTER_CAP`].
pub fn lr_via_characters(lambda: &impl Shape, mu: &impl Shape, nu: &impl Shape) -> Result<u64> {
    lr_via_characters_capped(lambda, mu, nu, DEFAULT_CHARACTER_CAP)
}

pub fn lr_via_characters_capped(
    lambda: &impl Shape,
    mu: &impl Shape,
    nu: &impl Shape,
    cap: usize,
) -> Result<u64> {
    let (l, k, n) = (mu.size(), nu.size(), lambda.size());
    if n > cap {
        return Err(Error::CapExceeded {
            what: "|λ| for the character oracle",
            value: n,
            cap,
        });
    }
    if l + k != n {
        return Ok(0);
    }
    let mut total = BigInt::zero();
    for sigma in CycleType::all(l) {
        let chi_mu = character(mu, &sigma)?;
        if chi_mu == 0 {
            continue;
        }
        for tau in CycleType::all(k) {
            let chi_nu = character(nu, &tau)?;
            if chi_nu == 0 {
                continue;
            }
            let mut joined = sigma.partition().parts().to_vec();
            joined.extend_from_slice(tau.partition().parts());
            let embedded = CycleType::new(joined)?;
            let chi_lambda = character(lambda, &embedded)?;
            let weight = BigInt::from(sigma.class_size()) * BigInt::from(tau.class_size());
            total += weight * BigInt::from(chi_mu * chi_nu * chi_lambda);
        }
    }
    let order = BigInt::from(factorial(l)) * BigInt::from(factorial(k));
    debug_assert!(
        (&total % &order).is_zero(),
        "character sum not divisible by |S_l × S_k|"
    );
    let value = total / order;
    value.to_u64().ok_or_else(|| {
        Error::SizeMismatch(format!(
            "character inner product {value} is not a multiplicity"
        ))
    })
}

/// All `(μ, ν) ∈ YF_{d,l} × YF_{d,k}` with `c^λ_{μν} ≠ 0`, where `d` is the
/// row budget of `λ`. Ordered by `μ` then `ν`, each decreasing
/// lexicographically.
pub fn lr_nonzero_pairs(lambda: &YoungFrame, l: usize, k: usize) -> Vec<(YoungFrame, YoungFrame)> {
    if l + k != lambda.n() {
        return Vec::new();
    }
    let d = lambda.d();
    let nus = frames_of(d, k);
    frames_of(d, l)
        .into_iter()
        .flat_map(|mu| {
            nus.iter()
                .filter(|nu| lr_coefficient(lambda, &mu, *nu) > 0)
                .map(|nu| (mu.clone(), nu.clone()))
                .collect::<Vec<_>>()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(rows: &[usize]) -> YoungFrame {
        YoungFrame::new(rows, 3).unwrap()
    }

    fn f2(rows: &[usize]) -> YoungFrame {
        YoungFrame::new(rows, 2).unwrap()
    }

    #[test]
    fn pieri_examples() {
        assert_eq!(lr_coefficient(&f(&[2]), &f(&[1]), &f(&[1])), 1);
        assert_eq!(lr_coefficient(&f(&[1, 1]), &f(&[1]), &f(&[1])), 1);
    }

    #[test]
    fn derived_examples_agree_with_characters() {
        type Case = (&'static [usize], &'static [usize], &'static [usize], u64);
        let cases: [Case; 7] = [
            (&[2], &[1], &[1], 1),
            (&[1, 1], &[1], &[1], 1),
            (&[3, 1], &[2], &[1, 1], 1),
            (&[2, 2], &[2], &[1, 1], 0),
            (&[2, 1], &[1], &[1, 1], 1),
            (&[4], &[2], &[1, 1], 0),
            (&[3, 2, 1], &[2, 1], &[2, 1], 2),
        ];
        for (lambda, mu, nu, expected) in cases {
            let (lambda, mu, nu) = (f(lambda), f(mu), f(nu));
            assert_eq!(
                lr_coefficient(&lambda, &mu, &nu),
                expected,
                "{lambda} {mu} {nu}"
            );
            assert_eq!(lr_via_characters(&lambda, &mu, &nu).unwrap(), expected);
        }
    }

    #[test]
    fn mismatched_sizes_give_zero() {
        assert_eq!(lr_coefficient(&f(&[3]), &f(&[1]), &f(&[1])), 0);
        assert_eq!(lr_coefficient(&f(&[2, 2]), &f(&[3]), &f(&[1])), 0);
        assert_eq!(lr_via_characters(&f(&[3]), &f(&[1]), &f(&[1])).unwrap(), 0);
    }

    #[test]
    fn character_oracle_is_capped() {
        let big = YoungFrame::new(&[11], 1).unwrap();
        let mu = YoungFrame::new(&[10], 1).unwrap();
        let nu = YoungFrame::new(&[1], 1).unwrap();
        assert!(matches!(
            lr_via_characters(&big, &mu, &nu),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn witnesses_are_valid_tableaux() {
        let ts = lr_tableaux(&f(&[3, 1]), &f(&[2]), &f(&[1, 1]));
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].filling(), &[vec![1], vec![2]]);
        assert_eq!(ts[0].reading_word(), vec![1, 2]);
        assert_eq!(ts[0].content(), vec![1, 1]);
        assert!(ts[0].is_valid());
        assert_eq!(ts[0].to_string(), ". . 1\n2");

        let many = lr_tableaux(&f(&[3, 2, 1]), &f(&[2, 1]), &f(&[2, 1]));
        assert_eq!(many.len(), 2);
        assert!(many.iter().all(LrTableau::is_valid));
    }

    #[test]
    fn nonzero_pairs_examples() {
        for n in 1..=6 {
            for l in 0..=n {
                let pairs = lr_nonzero_pairs(&f2(&[n]), l, n - l);
                assert_eq!(pairs, vec![(f2(&[l]), f2(&[n - l]))]);
            }
        }
        let pairs = lr_nonzero_pairs(&f2(&[3, 1]), 2, 2);
        assert_eq!(
            pairs,
            vec![
                (f2(&[2]), f2(&[2])),
                (f2(&[2]), f2(&[1, 1])),
                (f2(&[1, 1]), f2(&[2])),
            ]
        );
        assert!(lr_nonzero_pairs(&f2(&[3, 1]), 2, 1).is_empty());
    }
}
