//! The representation `Λ_q^N(C^n ⊗ C^m)` and its weight-block matrices.
//!
//! Variables `z_{ij}` (row `i ≤ n`, column `j ≤ m`) are ordered
//! lexicographically by `(row, col)`, and a wedge monomial is stored as a bit
//! mask over the flattened indices `(i-1)·m + (j-1)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use spin::RwLock;

use crate::coeffring::{qfact, RingElem};
use crate::weights::{rung_target, GlSequence, Object, RungKind};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable {
    pub row: u32,
    pub col: u32,
}

impl Variable {
    pub fn new(row: u32, col: u32) -> Self {
        Variable { row, col }
    }

    fn index(self, m: usize) -> u32 {
        (self.row - 1) * m as u32 + (self.col - 1)
    }
}

/// A normal-ordered wedge monomial.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub u64);

impl Monomial {
    pub fn from_vars(vars: &[Variable], m: usize) -> Option<Self> {
        let mut mask = 0u64;
        for v in vars {
            let bit = 1u64 << v.index(m);
            if mask & bit != 0 {
                return None;
            }
            mask |= bit;
        }
        Some(Monomial(mask))
    }

    pub fn vars(self, m: usize) -> Vec<Variable> {
        self.indices()
            .map(|ix| Variable::new(ix / m as u32 + 1, ix % m as u32 + 1))
            .collect()
    }

    fn indices(self) -> impl Iterator<Item = u32> {
        let mut mask = self.0;
        core::iter::from_fn(move || {
            if mask == 0 {
                None
            } else {
                let ix = mask.trailing_zeros();
                mask &= mask - 1;
                Some(ix)
            }
        })
    }

    pub fn degree(self) -> u32 {
        self.0.count_ones()
    }

    /// Column profile `(#col 1, …, #col m)`.
    pub fn profile(self, n: u32, m: usize) -> GlSequence {
        let mut e = vec![0i32; m];
        for ix in self.indices() {
            e[ix as usize % m] += 1;
        }
        GlSequence::new(n, e)
    }
}

/// A formal linear combination of wedge monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RepVector {
    pub terms: BTreeMap<Monomial, RingElem>,
}

impl RepVector {
    pub fn zero() -> Self {
        RepVector::default()
    }

    pub fn basis(mono: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(mono, RingElem::one());
        RepVector { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mono: Monomial, c: &RingElem) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(mono).or_insert_with(RingElem::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn scale(&self, c: &RingElem) -> Self {
        let mut out = RepVector::zero();
        for (mono, x) in &self.terms {
            out.add_term(*mono, &(x * c));
        }
        out
    }

    pub fn add(&self, other: &RepVector) -> Self {
        let mut out = self.clone();
        for (mono, x) in &other.terms {
            out.add_term(*mono, x);
        }
        out
    }
}

/// Sorts `vars` into normal order using `z_b z_a = -q^{-1} z_a z_b` for
/// `a < b`; zero if a variable repeats.
pub fn normal_order(vars: &[Variable], m: usize, coeff: &RingElem) -> RepVector {
    let Some(mono) = Monomial::from_vars(vars, m) else {
        return RepVector::zero();
    };
    let mut inversions = 0i64;
    for x in 0..vars.len() {
        for y in x + 1..vars.len() {
            if vars[x] > vars[y] {
                inversions += 1;
            }
        }
    }
    let c = coeff * &RingElem::signed_q_pow(inversions, -(inversions as i32));
    let mut out = RepVector::zero();
    out.add_term(mono, &c);
    out
}

/// A Chevalley generator of `U_q(sl_m)` at a 1-based position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Chevalley {
    E(usize),
    F(usize),
    /// `K_j^e`
    K(usize, i32),
}

fn k_exponent(ix: u32, m: usize, j: usize) -> i32 {
    let col = ix as usize % m + 1;
    if col == j {
        -1
    } else if col == j + 1 {
        1
    } else {
        0
    }
}

fn apply_to_monomial(gen: Chevalley, mono: Monomial, m: usize, out: &mut RepVector, c: &RingElem) {
    let idx: Vec<u32> = mono.indices().collect();
    match gen {
        Chevalley::K(j, e) => {
            let w: i32 = idx.iter().map(|&ix| k_exponent(ix, m, j)).sum();
            out.add_term(mono, &(c * &RingElem::q_pow(w * e)));
        }
        Chevalley::E(j) => {
            // K acts on every factor after the one hit by E.
            let mut tail: i32 = idx.iter().map(|&ix| k_exponent(ix, m, j)).sum();
            for &ix in &idx {
                tail -= k_exponent(ix, m, j);
                if ix as usize % m + 1 != j {
                    continue;
                }
                let new_bit = 1u64 << (ix + 1);
                if mono.0 & new_bit != 0 {
                    continue;
                }
                let img = Monomial((mono.0 & !(1u64 << ix)) | new_bit);
                out.add_term(img, &(c * &RingElem::q_pow(tail)));
            }
        }
        Chevalley::F(j) => {
            // K^{-1} acts on every factor before the one hit by F.
            let mut head = 0i32;
            for &ix in &idx {
                if ix as usize % m + 1 == j + 1 {
                    let new_bit = 1u64 << (ix - 1);
                    if mono.0 & new_bit == 0 {
                        let img = Monomial((mono.0 & !(1u64 << ix)) | new_bit);
                        out.add_term(img, &(c * &RingElem::q_pow(-head)));
                    }
                }
                head += k_exponent(ix, m, j);
            }
        }
    }
}

/// Applies a Chevalley generator to a vector of `Λ^N(C^n ⊗ C^m)`.
pub fn apply_chevalley(gen: Chevalley, m: usize, v: &RepVector) -> RepVector {
    let mut out = RepVector::zero();
    for (mono, c) in &v.terms {
        apply_to_monomial(gen, *mono, m, &mut out, c);
    }
    out
}

/// `E_j^{(k)}` or `F_j^{(k)}`: the generator applied `k` times, divided by `[k]!`.
pub fn apply_divided(kind: RungKind, j: usize, k: u32, m: usize, v: &RepVector) -> Result<RepVector, Error> {
    let gen = match kind {
        RungKind::E => Chevalley::E(j),
        RungKind::F => Chevalley::F(j),
    };
    let mut w = v.clone();
    for _ in 0..k {
        w = apply_chevalley(gen, m, &w);
    }
    if k <= 1 {
        return Ok(w);
    }
    let f = qfact(k);
    let mut out = RepVector::zero();
    for (mono, c) in &w.terms {
        out.add_term(*mono, &c.exact_div(&f)?);
    }
    Ok(out)
}

/// Column-major sparse matrix; column `c` is the image of basis vector `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    columns: Vec<Vec<(usize, RingElem)>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(dim: usize) -> Self {
        SparseMatrix {
            rows: dim,
            cols: dim,
            columns: (0..dim).map(|i| vec![(i, RingElem::one())]).collect(),
        }
    }

    /// Builds from columns given as `(row, value)` lists; zero entries and
    /// duplicate rows are normalized away.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, RingElem)>>) -> Self {
        let cols = columns.len();
        let columns = columns
            .into_iter()
            .map(|col| {
                let mut acc: BTreeMap<usize, RingElem> = BTreeMap::new();
                for (r, x) in col {
                    *acc.entry(r).or_insert_with(RingElem::zero) += &x;
                }
                acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
            })
            .collect();
        SparseMatrix { rows, cols, columns }
    }

    pub fn column(&self, c: usize) -> &[(usize, RingElem)] {
        &self.columns[c]
    }

    pub fn entry(&self, r: usize, c: usize) -> RingElem {
        self.columns[c]
            .iter()
            .find(|(row, _)| *row == r)
            .map(|(_, x)| x.clone())
            .unwrap_or_else(RingElem::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    /// `self · rhs`, i.e. apply `rhs` first.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix shapes do not compose");
        let mut columns = Vec::with_capacity(rhs.cols);
        for rc in &rhs.columns {
            let mut acc: BTreeMap<usize, RingElem> = BTreeMap::new();
            for (l, b) in rc {
                for (r, a) in &self.columns[*l] {
                    *acc.entry(*r).or_insert_with(RingElem::zero) += &(a * b);
                }
            }
            columns.push(acc.into_iter().filter(|(_, x)| !x.is_zero()).collect());
        }
        SparseMatrix { rows: self.rows, cols: rhs.cols, columns }
    }

    pub fn add(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix shapes differ");
        let columns = self
            .columns
            .iter()
            .zip(&rhs.columns)
            .map(|(a, b)| {
                let mut acc: BTreeMap<usize, RingElem> = a.iter().cloned().collect();
                for (r, x) in b {
                    *acc.entry(*r).or_insert_with(RingElem::zero) += x;
                }
                acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, columns }
    }

    pub fn scale(&self, c: &RingElem) -> SparseMatrix {
        self.map(|x| x * c)
    }

    /// Applies `f` entrywise, dropping entries that become zero.
    pub fn map<F: Fn(&RingElem) -> RingElem>(&self, f: F) -> SparseMatrix {
        let columns = self
            .columns
            .iter()
            .map(|col| {
                col.iter()
                    .map(|(r, x)| (*r, f(x)))
                    .filter(|(_, x)| !x.is_zero())
                    .collect()
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, columns }
    }

    pub fn try_map<F: Fn(&RingElem) -> Result<RingElem, Error>>(&self, f: F) -> Result<SparseMatrix, Error> {
        let mut columns = Vec::with_capacity(self.cols);
        for col in &self.columns {
            let mut out = Vec::with_capacity(col.len());
            for (r, x) in col {
                let y = f(x)?;
                if !y.is_zero() {
                    out.push((*r, y));
                }
            }
            columns.push(out);
        }
        Ok(SparseMatrix { rows: self.rows, cols: self.cols, columns })
    }

    /// Entries as `(row, col, value)` in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &RingElem)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, x)| (*r, c, x)))
    }
}

/// A linear map between direct sums of weight blocks, stored block by block.
/// Zero blocks are never stored, so equality is operator equality.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlockOperator {
    pub blocks: BTreeMap<(GlSequence, GlSequence), SparseMatrix>,
}

impl BlockOperator {
    pub fn zero() -> Self {
        BlockOperator::default()
    }

    pub fn single(src: GlSequence, tgt: GlSequence, mat: SparseMatrix) -> Self {
        let mut op = BlockOperator::zero();
        op.insert_add(src, tgt, mat);
        op
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn insert_add(&mut self, src: GlSequence, tgt: GlSequence, mat: SparseMatrix) {
        let key = (src, tgt);
        let sum = match self.blocks.remove(&key) {
            Some(old) => old.add(&mat),
            None => mat,
        };
        if !sum.is_zero() {
            self.blocks.insert(key, sum);
        }
    }

    pub fn add(&self, other: &BlockOperator) -> BlockOperator {
        let mut out = self.clone();
        for ((s, t), mat) in &other.blocks {
            out.insert_add(s.clone(), t.clone(), mat.clone());
        }
        out
    }

    pub fn sub(&self, other: &BlockOperator) -> BlockOperator {
        self.add(&other.scale(&RingElem::int(-1)))
    }

    pub fn scale(&self, c: &RingElem) -> BlockOperator {
        let mut out = BlockOperator::zero();
        for ((s, t), mat) in &self.blocks {
            out.insert_add(s.clone(), t.clone(), mat.scale(c));
        }
        out
    }

    /// `other ∘ self`: apply `self` first.
    pub fn then(&self, other: &BlockOperator) -> BlockOperator {
        let mut out = BlockOperator::zero();
        for ((s, mid), a) in &self.blocks {
            for ((s2, t), b) in other.blocks.range((mid.clone(), GlSequence::new(0, Vec::new()))..) {
                if s2 != mid {
                    break;
                }
                out.insert_add(s.clone(), t.clone(), b.mul(a));
            }
        }
        out
    }

    pub fn map_entries<F: Fn(&RingElem) -> Result<RingElem, Error>>(&self, f: F) -> Result<BlockOperator, Error> {
        let mut out = BlockOperator::zero();
        for ((s, t), mat) in &self.blocks {
            out.insert_add(s.clone(), t.clone(), mat.try_map(&f)?);
        }
        Ok(out)
    }

    /// The unique entry of a map between one-dimensional blocks.
    pub fn scalar(&self) -> Option<RingElem> {
        match self.blocks.len() {
            0 => Some(RingElem::zero()),
            1 => {
                let mat = self.blocks.values().next().unwrap();
                if mat.rows == 1 && mat.cols == 1 {
                    Some(mat.entry(0, 0))
                } else {
                    None
                }
            }
            _ => None,
        }
    }
}

/// Ordered monomial basis of one weight block.
#[derive(Debug)]
pub struct Basis {
    pub monomials: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
}

impl Basis {
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn position(&self, mono: Monomial) -> Option<usize> {
        self.index.get(&mono).copied()
    }
}

/// Cache key for block matrices. Other modules register their own operators
/// here so that each block is computed once per space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpKey {
    Divided(RungKind, usize, u32),
    /// Lusztig `T''_i` (`+1`) or its inverse (`-1`).
    Tpp(usize, i8),
    /// Lusztig `T'_i` or its inverse.
    Tp(usize, i8),
    /// Rescaled braiding `T_i^{±1}`.
    T(usize, i8),
    /// Affine `E_0^{(k)}` (`true`) or `F_0^{(k)}` with generic `a`.
    Affine(bool, u32),
}

/// The module `Λ_q^•(C^n ⊗ C^m)` with memoized block data.
#[derive(Debug)]
pub struct RepSpace {
    pub n: u32,
    pub m: usize,
    bases: RwLock<BTreeMap<Vec<i32>, Arc<Basis>>>,
    blocks: RwLock<BTreeMap<(Vec<i32>, OpKey), Arc<(Object, SparseMatrix)>>>,
}

impl RepSpace {
    pub fn new(n: u32, m: usize) -> Result<Self, Error> {
        if n == 0 || m == 0 || n as usize * m > 64 {
            return Err(Error::UnsupportedSize(format!("n={} m={} needs n*m <= 64", n, m)));
        }
        Ok(RepSpace {
            n,
            m,
            bases: RwLock::new(BTreeMap::new()),
            blocks: RwLock::new(BTreeMap::new()),
        })
    }

    pub fn check(&self, seq: &GlSequence) -> Result<(), Error> {
        if seq.m() != self.m || seq.n != self.n {
            return Err(Error::Precondition(format!("sequence {} does not belong to n={} m={}", seq, self.n, self.m)));
        }
        if !seq.is_admissible() {
            return Err(Error::InadmissibleSequence);
        }
        Ok(())
    }

    /// All monomials with column profile `seq`, ordered lexicographically by
    /// their sorted variable lists.
    pub fn weight_space_basis(&self, seq: &GlSequence) -> Result<Arc<Basis>, Error> {
        self.check(seq)?;
        if let Some(b) = self.bases.read().get(&seq.entries) {
            return Ok(b.clone());
        }
        let mut masks = vec![0u64];
        for (j, &a) in seq.entries.iter().enumerate() {
            let mut next = Vec::new();
            for rows in subsets(self.n, a as u32) {
                let mut col_mask = 0u64;
                for r in rows {
                    col_mask |= 1u64 << (r as usize * self.m + j);
                }
                for &mk in &masks {
                    next.push(mk | col_mask);
                }
            }
            masks = next;
        }
        let mut keyed: Vec<(Vec<u32>, Monomial)> =
            masks.into_iter().map(|mk| (Monomial(mk).indices().collect(), Monomial(mk))).collect();
        keyed.sort();
        let monomials: Vec<Monomial> = keyed.into_iter().map(|(_, mono)| mono).collect();
        let index = monomials.iter().enumerate().map(|(i, mono)| (*mono, i)).collect();
        let basis = Arc::new(Basis { monomials, index });
        Ok(self.bases.write().entry(seq.entries.clone()).or_insert(basis).clone())
    }

    pub fn dim(&self, seq: &GlSequence) -> Result<usize, Error> {
        Ok(self.weight_space_basis(seq)?.dim())
    }

    /// Looks up a cached block map, computing it outside the lock on a miss.
    /// Concurrent misses may compute twice; the first insertion wins.
    pub fn cached<F>(&self, seq: &GlSequence, key: OpKey, compute: F) -> Result<Arc<(Object, SparseMatrix)>, Error>
    where
        F: FnOnce() -> Result<(Object, SparseMatrix), Error>,
    {
        let k = (seq.entries.clone(), key);
        if let Some(hit) = self.blocks.read().get(&k) {
            return Ok(hit.clone());
        }
        let val = Arc::new(compute()?);
        Ok(self.blocks.write().entry(k).or_insert(val).clone())
    }

    /// Matrix of `E_j^{(k)}` or `F_j^{(k)}` out of block `seq`, with its target.
    pub fn divided_block(&self, seq: &GlSequence, kind: RungKind, j: usize, k: u32) -> Result<Arc<(Object, SparseMatrix)>, Error> {
        self.check(seq)?;
        if j == 0 || j >= self.m {
            return Err(Error::InvalidPosition(j));
        }
        self.cached(seq, OpKey::Divided(kind, j, k), || {
            let src = self.weight_space_basis(seq)?;
            let tgt = rung_target(seq, kind, j, k as i32);
            let Object::Seq(t) = &tgt else {
                return Ok((Object::Zero, SparseMatrix::zero(0, src.dim())));
            };
            let tb = self.weight_space_basis(t)?;
            let mut columns = Vec::with_capacity(src.dim());
            for &mono in &src.monomials {
                let img = apply_divided(kind, j, k, self.m, &RepVector::basis(mono))?;
                let col = img
                    .terms
                    .into_iter()
                    .map(|(mo, c)| (tb.position(mo).expect("image stays in the target block"), c))
                    .collect();
                columns.push(col);
            }
            Ok((tgt, SparseMatrix::from_columns(tb.dim(), columns)))
        })
    }

    pub fn identity(&self, seq: &GlSequence) -> Result<BlockOperator, Error> {
        let d = self.dim(seq)?;
        Ok(BlockOperator::single(seq.clone(), seq.clone(), SparseMatrix::identity(d)))
    }

    /// Every admissible block with `Σ a_i = total`.
    pub fn blocks_of_degree(&self, total: i32) -> Vec<GlSequence> {
        crate::weights::all_sequences(self.n, self.m, total)
    }

    /// Coordinates of a homogeneous vector in its block basis.
    pub fn coordinates(&self, seq: &GlSequence, v: &RepVector) -> Result<Vec<RingElem>, Error> {
        let b = self.weight_space_basis(seq)?;
        let mut out = vec![RingElem::zero(); b.dim()];
        for (mono, c) in &v.terms {
            let p = b.position(*mono).ok_or_else(|| Error::Precondition(format!("vector is not in block {}", seq)))?;
            out[p] = c.clone();
        }
        Ok(out)
    }
}

fn subsets(n: u32, k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() == k {
            out.push((0..n).filter(|r| mask & (1 << r) != 0).collect());
        }
    }
    out
}

/// Composite of divided-power rungs on one block, applied in list order.
/// `None` when some intermediate object is zero.
pub fn rung_word_block(
    space: &RepSpace,
    seq: &GlSequence,
    items: &[(RungKind, usize, u32)],
) -> Result<Option<(GlSequence, SparseMatrix)>, Error> {
    let mut cur = seq.clone();
    let mut mat: Option<SparseMatrix> = None;
    for &(kind, j, k) in items {
        if k == 0 {
            continue;
        }
        let blk = space.divided_block(&cur, kind, j, k)?;
        let Object::Seq(t) = &blk.0 else {
            return Ok(None);
        };
        mat = Some(match mat {
            None => blk.1.clone(),
            Some(m0) => blk.1.mul(&m0),
        });
        cur = t.clone();
    }
    let mat = match mat {
        Some(m0) => m0,
        None => SparseMatrix::identity(space.dim(seq)?),
    };
    Ok(Some((cur, mat)))
}

impl RepSpace {
    /// Applies a weight-homogeneous operator, given block by block, to an
    /// arbitrary vector.
    pub fn apply_blockwise<F>(&self, v: &RepVector, mut block: F) -> Result<RepVector, Error>
    where
        F: FnMut(&GlSequence) -> Result<Option<(GlSequence, SparseMatrix)>, Error>,
    {
        let mut parts: BTreeMap<GlSequence, RepVector> = BTreeMap::new();
        for (mono, c) in &v.terms {
            parts.entry(mono.profile(self.n, self.m)).or_default().add_term(*mono, c);
        }
        let mut out = RepVector::zero();
        for (seq, part) in parts {
            let coords = self.coordinates(&seq, &part)?;
            let Some((tgt, mat)) = block(&seq)? else {
                continue;
            };
            let tb = self.weight_space_basis(&tgt)?;
            for (r, c, x) in mat.entries() {
                if !coords[c].is_zero() {
                    out.add_term(tb.monomials[r], &(x * &coords[c]));
                }
            }
        }
        Ok(out)
    }
}

/// A word item executable on weight blocks without braiding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    E(usize, u32),
    F(usize, u32),
    K(usize, i32),
}

/// Matrix of a word of generators on one source block; items are applied in
/// list order. A zero-object intermediate gives the zero operator.
pub fn operator_matrix(space: &RepSpace, word: &[Gen], source: &GlSequence) -> Result<BlockOperator, Error> {
    let mut cur = source.clone();
    let mut mat = SparseMatrix::identity(space.dim(source)?);
    for g in word {
        match *g {
            Gen::E(j, k) | Gen::F(j, k) => {
                let kind = if matches!(g, Gen::E(..)) { RungKind::E } else { RungKind::F };
                let blk = space.divided_block(&cur, kind, j, k)?;
                match &blk.0 {
                    Object::Zero => return Ok(BlockOperator::zero()),
                    Object::Seq(t) => {
                        mat = blk.1.mul(&mat);
                        cur = t.clone();
                    }
                }
            }
            Gen::K(j, e) => {
                if j == 0 || j >= space.m {
                    return Err(Error::InvalidPosition(j));
                }
                mat = mat.scale(&RingElem::q_pow(cur.lambda(j) * e));
            }
        }
    }
    Ok(BlockOperator::single(source.clone(), cur, mat))
}

/// Matrix of a word summed over every block of degree `total`.
pub fn operator_on_degree(space: &RepSpace, word: &[Gen], total: i32) -> Result<BlockOperator, Error> {
    let mut out = BlockOperator::zero();
    for s in space.blocks_of_degree(total) {
        out = out.add(&operator_matrix(space, word, &s)?);
    }
    Ok(out)
}
