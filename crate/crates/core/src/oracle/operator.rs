use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::rational::ExactScalar;

/// Basis words of `(C^d)^{⊗n}` in lexicographic order; site 0 is the most
/// significant digit.
#[derive(Clone, Debug)]
pub(crate) struct Words {
    pub d: usize,
    pub n: usize,
    /// `place[i] = d^{n−1−i}`.
    pub place: Vec<usize>,
}

impl Words {
    pub fn new(d: usize, n: usize) -> Self {
        let mut place = vec![1; n];
        for i in (0..n.saturating_sub(1)).rev() {
            place[i] = place[i + 1] * d;
        }
        Words { d, n, place }
    }

    pub fn dim(&self) -> usize {
        self.d.pow(self.n as u32)
    }

    pub fn digits(&self, mut index: usize) -> Vec<u8> {
        let mut out = vec![0u8; self.n];
        for i in (0..self.n).rev() {
            out[i] = (index % self.d) as u8;
            index /= self.d;
        }
        out
    }

    pub fn index(&self, digits: &[u8]) -> usize {
        digits
            .iter()
            .zip(&self.place)
            .map(|(&x, &p)| x as usize * p)
            .sum()
    }
}

/// An exact rational operator on `(C^d)^{⊗n}`: a `d^n × d^n` matrix indexed
/// by basis words in lexicographic order.
///
/// Stored as sparse rows of integer numerators over one positive common
/// denominator. Every constructor and operation returns the canonical form
/// (no stored zeros, the denominator coprime to the numerators), so `==`
/// is exact equality of the matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorOperator {
    d: usize,
    n: usize,
    denom: BigInt,
    rows: Vec<BTreeMap<usize, BigInt>>,
}

impl TensorOperator {
    pub(crate) fn from_numerators(
        d: usize,
        n: usize,
        denom: BigInt,
        rows: Vec<BTreeMap<usize, BigInt>>,
    ) -> Self {
        let mut op = TensorOperator { d, n, denom, rows };
        op.normalize();
        op
    }

    fn normalize(&mut self) {
        for row in &mut self.rows {
            row.retain(|_, v| !v.is_zero());
        }
        if self.denom.is_negative() {
            self.denom = -&self.denom;
            for row in &mut self.rows {
                for v in row.values_mut() {
                    *v = -&*v;
                }
            }
        }
        let mut g = self.denom.clone();
        for row in &self.rows {
            for v in row.values() {
                if g.is_one() {
                    break;
                }
                g = g.gcd(v);
            }
        }
        if self.rows.iter().all(BTreeMap::is_empty) {
            self.denom = BigInt::one();
            return;
        }
        if !g.is_one() {
            self.denom /= &g;
            for row in &mut self.rows {
                for v in row.values_mut() {
                    *v /= &g;
                }
            }
        }
    }

    pub fn zero(d: usize, n: usize) -> Self {
        let dim = d.pow(n as u32);
        TensorOperator {
            d,
            n,
            denom: BigInt::one(),
            rows: vec![BTreeMap::new(); dim],
        }
    }

    pub fn identity(d: usize, n: usize) -> Self {
        let mut op = TensorOperator::zero(d, n);
        for (i, row) in op.rows.iter_mut().enumerate() {
            row.insert(i, BigInt::one());
        }
        op
    }

    /// A `1 × 1` operator on zero sites of local dimension `d`.
    pub fn scalar(value: &ExactScalar, d: usize) -> Self {
        TensorOperator::identity(d, 0).scale(value)
    }

    /// Builds an operator from `(row, col, value)` triples; repeated
    /// positions are summed.
    pub fn from_entries(
        d: usize,
        n: usize,
        entries: impl IntoIterator<Item = (usize, usize, ExactScalar)>,
    ) -> Result<Self> {
        let dim = d.pow(n as u32);
        let entries: Vec<_> = entries.into_iter().collect();
        let mut denom = BigInt::one();
        for (r, c, v) in &entries {
            if *r >= dim || *c >= dim {
                return Err(Error::SizeMismatch(format!(
                    "entry ({r}, {c}) outside a {dim} × {dim} operator"
                )));
            }
            denom = denom.lcm(v.denom());
        }
        let mut rows = vec![BTreeMap::new(); dim];
        for (r, c, v) in entries {
            let scaled = v.numer() * (&denom / v.denom());
            *rows[r].entry(c).or_insert_with(BigInt::zero) += scaled;
        }
        Ok(TensorOperator::from_numerators(d, n, denom, rows))
    }

    pub fn from_dense(d: usize, n: usize, matrix: &[Vec<ExactScalar>]) -> Result<Self> {
        let dim = d.pow(n as u32);
        if matrix.len() != dim || matrix.iter().any(|row| row.len() != dim) {
            return Err(Error::SizeMismatch(format!(
                "dense matrix is not {dim} × {dim}"
            )));
        }
        TensorOperator::from_entries(
            d,
            n,
            matrix.iter().enumerate().flat_map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(move |(c, v)| (r, c, v.clone()))
            }),
        )
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn words(&self) -> Words {
        Words::new(self.d, self.n)
    }

    pub(crate) fn denom(&self) -> &BigInt {
        &self.denom
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BTreeMap::is_empty)
    }

    pub fn get(&self, row: usize, col: usize) -> ExactScalar {
        match self.rows.get(row).and_then(|r| r.get(&col)) {
            Some(v) => BigRational::new(v.clone(), self.denom.clone()),
            None => BigRational::zero(),
        }
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, ExactScalar)> + '_ {
        self.rows.iter().enumerate().flat_map(move |(r, row)| {
            row.iter()
                .map(move |(&c, v)| (r, c, BigRational::new(v.clone(), self.denom.clone())))
        })
    }

    pub(crate) fn numerators(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(&c, v)| (r, c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<ExactScalar>> {
        let dim = self.dim();
        let mut out = vec![vec![BigRational::zero(); dim]; dim];
        for (r, c, v) in self.entries() {
            out[r][c] = v;
        }
        out
    }

    pub fn trace(&self) -> ExactScalar {
        let sum: BigInt = self
            .rows
            .iter()
            .enumerate()
            .filter_map(|(i, row)| row.get(&i))
            .sum();
        BigRational::new(sum, self.denom.clone())
    }

    fn check_same_shape(&self, other: &TensorOperator) -> Result<()> {
        if self.d != other.d || self.n != other.n {
            return Err(Error::SizeMismatch(format!(
                "operators on (C^{})^⊗{} and (C^{})^⊗{}",
                self.d, self.n, other.d, other.n
            )));
        }
        Ok(())
    }

    pub fn scale(&self, factor: &ExactScalar) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|(&c, v)| (c, v * factor.numer())).collect())
            .collect();
        TensorOperator::from_numerators(self.d, self.n, &self.denom * factor.denom(), rows)
    }

    fn combine(&self, other: &TensorOperator, sign: i32) -> Result<Self> {
        self.check_same_shape(other)?;
        let denom = self.denom.lcm(&other.denom);
        let fa = &denom / &self.denom;
        let fb = &denom / &other.denom;
        let mut rows: Vec<BTreeMap<usize, BigInt>> = self
            .rows
            .iter()
            .map(|row| row.iter().map(|(&c, v)| (c, v * &fa)).collect())
            .collect();
        for (r, row) in other.rows.iter().enumerate() {
            for (&c, v) in row {
                let term = v * &fb;
                let slot = rows[r].entry(c).or_insert_with(BigInt::zero);
                if sign < 0 {
                    *slot -= term;
                } else {
                    *slot += term;
                }
            }
        }
        Ok(TensorOperator::from_numerators(self.d, self.n, denom, rows))
    }

    pub fn add(&self, other: &TensorOperator) -> Result<Self> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &TensorOperator) -> Result<Self> {
        self.combine(other, -1)
    }

    /// Matrix product `self · other`.
    pub fn matmul(&self, other: &TensorOperator) -> Result<Self> {
        self.check_same_shape(other)?;
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
                for (&k, a) in row {
                    for (&j, b) in &other.rows[k] {
                        *acc.entry(j).or_insert_with(BigInt::zero) += a * b;
                    }
                }
                acc
            })
            .collect();
        Ok(TensorOperator::from_numerators(
            self.d,
            self.n,
            &self.denom * &other.denom,
            rows,
        ))
    }

    /// `tr(self · other)`.
    pub fn overlap(&self, other: &TensorOperator) -> Result<ExactScalar> {
        self.check_same_shape(other)?;
        let mut sum = BigInt::zero();
        for (i, row) in self.rows.iter().enumerate() {
            for (&j, a) in row {
                if let Some(b) = other.rows[j].get(&i) {
                    sum += a * b;
                }
            }
        }
        Ok(BigRational::new(sum, &self.denom * &other.denom))
    }

    /// Kronecker product; `self` occupies the first `self.n()` sites.
    pub fn kron(&self, other: &TensorOperator) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::SizeMismatch(format!(
                "local dimensions {} and {} differ",
                self.d, other.d
            )));
        }
        let inner = other.dim();
        let mut rows = vec![BTreeMap::new(); self.dim() * inner];
        for (ra, ca, a) in self.numerators() {
            for (rb, cb, b) in other.numerators() {
                rows[ra * inner + rb].insert(ca * inner + cb, a * b);
            }
        }
        Ok(TensorOperator::from_numerators(
            self.d,
            self.n + other.n,
            &self.denom * &other.denom,
            rows,
        ))
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![BTreeMap::new(); self.dim()];
        for (r, c, v) in self.numerators() {
            rows[c].insert(r, v.clone());
        }
        TensorOperator {
            d: self.d,
            n: self.n,
            denom: self.denom.clone(),
            rows,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.numerators()
            .all(|(r, c, v)| self.rows[c].get(&r) == Some(v))
    }

    /// `A · A = A`, exactly.
    pub fn is_projector(&self) -> bool {
        self.matmul(self).map(|sq| sq == *self).unwrap_or(false)
    }

    pub fn commutes_with(&self, other: &TensorOperator) -> Result<bool> {
        Ok(self.matmul(other)? == other.matmul(self)?)
    }

    /// `B(τ) · A · B(τ)⁻¹`, i.e. the entry at `(x, y)` moves to `(τx, τy)`.
    pub fn conjugate_by(&self, tau: &Permutation) -> Result<Self> {
        if tau.len() != self.n {
            return Err(Error::SizeMismatch(format!(
                "permutation of {} sites acting on {} sites",
                tau.len(),
                self.n
            )));
        }
        let words = self.words();
        let moved: Vec<usize> = (0..self.dim())
            .map(|x| words.index(&tau.act_on_word(&words.digits(x))))
            .collect();
        let mut rows = vec![BTreeMap::new(); self.dim()];
        for (r, c, v) in self.numerators() {
            rows[moved[r]].insert(moved[c], v.clone());
        }
        Ok(TensorOperator {
            d: self.d,
            n: self.n,
            denom: self.denom.clone(),
            rows,
        })
    }

    fn checked_sites(&self, sites: &[usize], total: usize) -> Result<Vec<usize>> {
        let mut sorted = sites.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != sites.len() || sorted.iter().any(|&s| s >= total) {
            return Err(Error::SizeMismatch(format!(
                "site set {sites:?} is not a subset of 0..{total}"
            )));
        }
        Ok(sorted)
    }

    /// `tr_B(A)`: traces out the 0-based `sites`; the remaining sites keep
    /// their relative order.
    pub fn partial_trace(&self, sites: &[usize]) -> Result<Self> {
        let traced = self.checked_sites(sites, self.n)?;
        if traced.is_empty() {
            return Ok(self.clone());
        }
        let kept: Vec<usize> = (0..self.n).filter(|s| !traced.contains(s)).collect();
        let words = self.words();
        let reduced = Words::new(self.d, kept.len());
        let mut rows = vec![BTreeMap::new(); reduced.dim()];
        for (r, c, v) in self.numerators() {
            let x = words.digits(r);
            let y = words.digits(c);
            if traced.iter().any(|&s| x[s] != y[s]) {
                continue;
            }
            let xr: Vec<u8> = kept.iter().map(|&s| x[s]).collect();
            let yr: Vec<u8> = kept.iter().map(|&s| y[s]).collect();
            *rows[reduced.index(&xr)]
                .entry(reduced.index(&yr))
                .or_insert_with(BigInt::zero) += v;
        }
        Ok(TensorOperator::from_numerators(
            self.d,
            kept.len(),
            self.denom.clone(),
            rows,
        ))
    }

    /// Inserts an identity factor at each of the 0-based `sites` of the
    /// enlarged system of `n + |sites|` sites.
    pub fn insert_identity(&self, sites: &[usize]) -> Result<Self> {
        let total = self.n + sites.len();
        let inserted = self.checked_sites(sites, total)?;
        if inserted.is_empty() {
            return Ok(self.clone());
        }
        let kept: Vec<usize> = (0..total).filter(|s| !inserted.contains(s)).collect();
        let small = self.words();
        let big = Words::new(self.d, total);
        let fill = Words::new(self.d, inserted.len());
        let mut rows = vec![BTreeMap::new(); big.dim()];
        let mut x = vec![0u8; total];
        let mut y = vec![0u8; total];
        for (r, c, v) in self.numerators() {
            let xr = small.digits(r);
            let yr = small.digits(c);
            for (pos, &s) in kept.iter().enumerate() {
                x[s] = xr[pos];
                y[s] = yr[pos];
            }
            for z in 0..fill.dim() {
                let zd = fill.digits(z);
                for (pos, &s) in inserted.iter().enumerate() {
                    x[s] = zd[pos];
                    y[s] = zd[pos];
                }
                rows[big.index(&x)].insert(big.index(&y), v.clone());
            }
        }
        Ok(TensorOperator {
            d: self.d,
            n: total,
            denom: self.denom.clone(),
            rows,
        })
    }

    /// Inserts `π = 𝟙/d` at each of the 0-based `sites` of the enlarged
    /// system.
    pub fn insert_maximally_mixed(&self, sites: &[usize]) -> Result<Self> {
        let with_identity = self.insert_identity(sites)?;
        let factor = BigRational::new(
            BigInt::one(),
            num_traits::pow(BigInt::from(self.d), sites.len()),
        );
        Ok(with_identity.scale(&factor))
    }

    /// Exact positive-semidefiniteness test for a symmetric rational matrix.
    ///
    /// The sparsity pattern is split into connected blocks; each block is
    /// reduced by symmetric Gaussian elimination on positive diagonal
    /// pivots. A negative pivot, or a zero diagonal with a nonzero row,
    /// certifies that the matrix is not PSD.
    pub fn is_positive_semidefinite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        let dim = self.dim();
        let mut parent: Vec<usize> = (0..dim).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for (r, c, _) in self.numerators() {
            let (a, b) = (find(&mut parent, r), find(&mut parent, c));
            if a != b {
                parent[a] = b;
            }
        }
        let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..dim {
            let root = find(&mut parent, i);
            blocks.entry(root).or_default().push(i);
        }
        blocks.values().all(|members| {
            let local: BTreeMap<usize, usize> =
                members.iter().enumerate().map(|(a, &g)| (g, a)).collect();
            let size = members.len();
            let mut m = vec![vec![BigRational::zero(); size]; size];
            for (a, &g) in members.iter().enumerate() {
                for (c, v) in &self.rows[g] {
                    m[a][local[c]] = BigRational::from_integer(v.clone());
                }
            }
            symmetric_psd(m)
        })
    }

    /// Plain-text dump: a `# tensor-operator d=<d> n=<n>` header, then one
    /// `row col numerator/denominator` line per nonzero entry in row-major
    /// order.
    pub fn to_dump(&self) -> String {
        let mut out = format!("# tensor-operator d={} n={}\n", self.d, self.n);
        for (r, c, v) in self.entries() {
            let _ = writeln!(out, "{r} {c} {}/{}", v.numer(), v.denom());
        }
        out
    }

    pub fn from_dump(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Dump {
            line: 1,
            message: "empty dump".to_string(),
        })?;
        let bad_header = || Error::Dump {
            line: 1,
            message: format!("expected '# tensor-operator d=<d> n=<n>', found {header:?}"),
        };
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "#" || fields[1] != "tensor-operator" {
            return Err(bad_header());
        }
        let parse_kv =
            |field: &str, key: &str| -> Option<usize> { field.strip_prefix(key)?.parse().ok() };
        let d = parse_kv(fields[2], "d=").ok_or_else(bad_header)?;
        let n = parse_kv(fields[3], "n=").ok_or_else(bad_header)?;
        let mut entries = Vec::new();
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let err = |message: &str| Error::Dump {
                line: i + 1,
                message: message.to_string(),
            };
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(err("expected 'row col numerator/denominator'"));
            }
            let r: usize = parts[0].parse().map_err(|_| err("bad row index"))?;
            let c: usize = parts[1].parse().map_err(|_| err("bad column index"))?;
            let v = crate::rational::parse_rational(parts[2]).map_err(|_| err("bad value"))?;
            entries.push((r, c, v));
        }
        TensorOperator::from_entries(d, n, entries)
    }
}

fn symmetric_psd(mut m: Vec<Vec<BigRational>>) -> bool {
    let size = m.len();
    let mut active: Vec<bool> = vec![true; size];
    for _ in 0..size {
        let mut pivot = None;
        for i in 0..size {
            if !active[i] {
                continue;
            }
            if m[i][i].is_negative() {
                return false;
            }
            if m[i][i].is_zero() {
                if (0..size).any(|j| active[j] && !m[i][j].is_zero()) {
                    return false;
                }
                active[i] = false;
                continue;
            }
            if pivot.is_none() {
                pivot = Some(i);
            }
        }
        let Some(p) = pivot else {
            return true;
        };
        active[p] = false;
        let pivot_value = m[p][p].clone();
        let column: Vec<(usize, BigRational)> = (0..size)
            .filter(|&i| active[i] && !m[i][p].is_zero())
            .map(|i| (i, m[i][p].clone()))
            .collect();
        for (i, mip) in &column {
            let factor = mip / &pivot_value;
            for (j, mpj) in &column {
                m[*i][*j] -= &factor * mpj;
            }
        }
    }
    true
}
