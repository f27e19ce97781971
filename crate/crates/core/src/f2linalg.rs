//! GF(2) linear algebra for stabilizer check matrices.
//!
//! The central routine is [`to_standard_form`], which row-reduces an
//! `(n-k) × 2n` check matrix into the block layout
//!
//! ```text
//! [ I  A1 A2 | B C1 C2 ]   r rows
//! [ 0  0  0  | D I  E  ]   n-k-r rows
//! ```
//!
//! permuting qubits (columns of both halves at once) where needed, and then
//! derives the logical operators from the blocks.

use std::fmt;

use crate::error::{Error, Result};
use crate::pauli::{symplectic_product, PauliString};

/// Dense binary matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinMatrix {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl BinMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BinMatrix { rows, cols, bits: vec![false; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BinMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = BinMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension { expected: cols, found: row.len() });
            }
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        Ok(m)
    }

    /// Parses rows written as `0`/`1` strings, e.g. `["1101100", "1011010"]`.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let parsed = rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.chars()
                    .enumerate()
                    .map(|(j, c)| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(Error::parse(format!("row {i}, column {j}"), format!("invalid bit {c:?}"))),
                    })
                    .collect::<Result<Vec<bool>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        BinMatrix::from_rows(&parsed)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        self.bits[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        self.bits[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[bool] {
        &self.bits[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.row(r).iter().all(|&b| !b)
    }

    /// `row[dst] ^= row[src]`
    pub fn add_row(&mut self, src: usize, dst: usize) {
        for c in 0..self.cols {
            if self.get(src, c) {
                let v = self.get(dst, c);
                self.set(dst, c, !v);
            }
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.bits.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.bits.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    pub fn transpose(&self) -> BinMatrix {
        let mut t = BinMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &BinMatrix) -> Result<BinMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension { expected: self.cols, found: other.rows });
        }
        let mut out = BinMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let v = (0..self.cols).fold(false, |acc, t| acc ^ (self.get(i, t) & other.get(t, j)));
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &BinMatrix) -> Result<BinMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension { expected: self.rows * self.cols, found: other.rows * other.cols });
        }
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect();
        Ok(BinMatrix { rows: self.rows, cols: self.cols, bits })
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| !b)
    }

    /// Copy of rows `r0..r1` and columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> BinMatrix {
        let mut m = BinMatrix::zeros(r1 - r0, c1 - c0);
        for r in r0..r1 {
            for c in c0..c1 {
                m.set(r - r0, c - c0, self.get(r, c));
            }
        }
        m
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &BinMatrix) -> Result<BinMatrix> {
        if self.rows != other.rows {
            return Err(Error::Dimension { expected: self.rows, found: other.rows });
        }
        let mut m = BinMatrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c));
            }
        }
        Ok(m)
    }

    /// `[self ; other]`
    pub fn vstack(&self, other: &BinMatrix) -> Result<BinMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension { expected: self.cols, found: other.cols });
        }
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        Ok(BinMatrix { rows: self.rows + other.rows, cols: self.cols, bits })
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            if let Some(p) = (rank..m.rows).find(|&r| m.get(r, c)) {
                m.swap_rows(p, rank);
                for r in 0..m.rows {
                    if r != rank && m.get(r, c) {
                        m.add_row(rank, r);
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    pub fn row_string(&self, r: usize) -> String {
        self.row(r).iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            writeln!(f, "{}", self.row_string(r))?;
        }
        Ok(())
    }
}

/// True iff `v` lies in the GF(2) row space of `m`.
pub fn row_space_contains(m: &BinMatrix, v: &[bool]) -> Result<bool> {
    if v.len() != m.cols() {
        return Err(Error::Dimension { expected: m.cols(), found: v.len() });
    }
    let extended = m.vstack(&BinMatrix::from_rows(&[v.to_vec()])?)?;
    Ok(extended.rank() == m.rank())
}

/// Stabilizer check matrix `[X | Z]` with `n - k` rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckMatrix {
    n: usize,
    k: usize,
    xblock: BinMatrix,
    zblock: BinMatrix,
}

impl CheckMatrix {
    /// Builds and validates: rows must pairwise commute and be independent.
    pub fn new(xblock: BinMatrix, zblock: BinMatrix) -> Result<Self> {
        let h = CheckMatrix::new_unchecked(xblock, zblock)?;
        h.validate()?;
        Ok(h)
    }

    /// Shape checks only.
    pub fn new_unchecked(xblock: BinMatrix, zblock: BinMatrix) -> Result<Self> {
        if xblock.rows() != zblock.rows() {
            return Err(Error::Dimension { expected: xblock.rows(), found: zblock.rows() });
        }
        if xblock.cols() != zblock.cols() {
            return Err(Error::Dimension { expected: xblock.cols(), found: zblock.cols() });
        }
        let n = xblock.cols();
        if xblock.rows() > n {
            return Err(Error::Validation(format!(
                "{} generators on {n} qubits leaves no logical space",
                xblock.rows()
            )));
        }
        Ok(CheckMatrix { n, k: n - xblock.rows(), xblock, zblock })
    }

    pub fn from_paulis(generators: &[PauliString]) -> Result<Self> {
        let n = generators.first().map(PauliString::len).ok_or_else(|| {
            Error::Validation("at least one generator is required".into())
        })?;
        for g in generators {
            if g.len() != n {
                return Err(Error::Dimension { expected: n, found: g.len() });
            }
        }
        let x = BinMatrix::from_rows(&generators.iter().map(PauliString::xbits).collect::<Vec<_>>())?;
        let z = BinMatrix::from_rows(&generators.iter().map(PauliString::zbits).collect::<Vec<_>>())?;
        CheckMatrix::new(x, z)
    }

    pub fn validate(&self) -> Result<()> {
        let rows: Vec<PauliString> = (0..self.num_rows()).map(|i| self.row_pauli(i)).collect();
        for i in 0..rows.len() {
            for j in i + 1..rows.len() {
                if symplectic_product(&rows[i], &rows[j])? == 1 {
                    return Err(Error::NonCommuting(i, j));
                }
            }
        }
        let rank = self.joint().rank();
        if rank < self.num_rows() {
            return Err(Error::RankDeficient { rank, rows: self.num_rows() });
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_rows(&self) -> usize {
        self.xblock.rows()
    }

    pub fn xblock(&self) -> &BinMatrix {
        &self.xblock
    }

    pub fn zblock(&self) -> &BinMatrix {
        &self.zblock
    }

    /// `[X | Z]` as one `(n-k) × 2n` matrix.
    pub fn joint(&self) -> BinMatrix {
        self.xblock.hstack(&self.zblock).expect("blocks have equal row counts")
    }

    /// Row `i` as a phase-`+1` Pauli string.
    pub fn row_pauli(&self, i: usize) -> PauliString {
        PauliString::from_bits(self.xblock.row(i), self.zblock.row(i)).expect("blocks have equal widths")
    }

    pub fn rows_as_paulis(&self) -> Vec<PauliString> {
        (0..self.num_rows()).map(|i| self.row_pauli(i)).collect()
    }
}

impl fmt::Display for CheckMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.num_rows() {
            writeln!(f, "{} | {}", self.xblock.row_string(r), self.zblock.row_string(r))?;
        }
        Ok(())
    }
}

/// Check matrix in standard form together with its blocks and logical operators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardForm {
    pub hs: CheckMatrix,
    /// Rank of the X portion.
    pub r: usize,
    /// `perm[p]` is the original qubit now sitting at position `p`.
    pub perm: Vec<usize>,
    pub a1: BinMatrix,
    pub a2: BinMatrix,
    pub b: BinMatrix,
    pub c1: BinMatrix,
    pub c2: BinMatrix,
    pub d: BinMatrix,
    pub e: BinMatrix,
    /// `k` rows of `2n` bits, `[x | z]`.
    pub xlogical: BinMatrix,
    pub zlogical: BinMatrix,
}

impl StandardForm {
    pub fn n(&self) -> usize {
        self.hs.n()
    }

    pub fn k(&self) -> usize {
        self.hs.k()
    }

    pub fn is_identity_perm(&self) -> bool {
        self.perm.iter().enumerate().all(|(p, &q)| p == q)
    }

    /// Inverse permutation: `inv[q]` is the position of original qubit `q`.
    pub fn inverse_perm(&self) -> Vec<usize> {
        let mut inv = vec![0; self.perm.len()];
        for (p, &q) in self.perm.iter().enumerate() {
            inv[q] = p;
        }
        inv
    }

    pub fn logical_x(&self, i: usize) -> PauliString {
        logical_row(&self.xlogical, i, self.n())
    }

    pub fn logical_z(&self, i: usize) -> PauliString {
        logical_row(&self.zlogical, i, self.n())
    }
}

fn logical_row(m: &BinMatrix, i: usize, n: usize) -> PauliString {
    let row = m.row(i);
    PauliString::from_bits(&row[..n], &row[n..]).expect("logical rows are 2n wide")
}

/// Renders a `2n`-bit logical row as `00001|10010`.
pub fn format_symplectic_row(m: &BinMatrix, i: usize) -> String {
    let n = m.cols() / 2;
    let s = m.row_string(i);
    format!("{}|{}", &s[..n], &s[n..])
}

struct Reduction {
    x: BinMatrix,
    z: BinMatrix,
    perm: Vec<usize>,
}

impl Reduction {
    fn block(&self, use_z: bool) -> &BinMatrix {
        if use_z {
            &self.z
        } else {
            &self.x
        }
    }

    fn add_row(&mut self, src: usize, dst: usize) {
        self.x.add_row(src, dst);
        self.z.add_row(src, dst);
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.x.swap_rows(a, b);
        self.z.swap_rows(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.x.swap_cols(a, b);
        self.z.swap_cols(a, b);
        self.perm.swap(a, b);
    }

    /// Gauss-Jordan on one block over rows `row0..` and columns `col0..`.
    /// Pivots are searched lowest row first; when the current column has no
    /// pivot among the remaining rows, the next column to its right that has
    /// one is swapped in. Returns the number of pivots placed.
    fn eliminate(&mut self, use_z: bool, row0: usize, col0: usize) -> usize {
        let (rows, cols) = (self.x.rows(), self.x.cols());
        let mut row = row0;
        let mut col = col0;
        while row < rows && col < cols {
            let find = |m: &BinMatrix, c: usize| (row..rows).find(|&r| m.get(r, c));
            let pivot = match find(self.block(use_z), col) {
                Some(p) => p,
                None => {
                    let next = (col + 1..cols).find(|&c| find(self.block(use_z), c).is_some());
                    match next {
                        Some(c) => {
                            self.swap_cols(col, c);
                            find(self.block(use_z), col).expect("swapped-in column has a pivot")
                        }
                        None => break,
                    }
                }
            };
            self.swap_rows(pivot, row);
            for r in row0..rows {
                if r != row && self.block(use_z).get(r, col) {
                    self.add_row(row, r);
                }
            }
            row += 1;
            col += 1;
        }
        row - row0
    }

    /// If every nonzero X row owns a column whose only 1 is in that row,
    /// moves those columns to the front (in row order) and those rows to the
    /// top, without any row operations.
    fn take_systematic_x(&mut self, rank: usize) -> bool {
        let (rows, cols) = (self.x.rows(), self.x.cols());
        let active: Vec<usize> = (0..rows).filter(|&r| !self.x.row_is_zero(r)).collect();
        if active.len() != rank {
            return false;
        }
        let mut pivots = Vec::with_capacity(rank);
        for &r in &active {
            let unit = (0..cols).find(|&c| self.x.get(r, c) && (0..rows).all(|o| o == r || !self.x.get(o, c)));
            match unit {
                Some(c) => pivots.push(c),
                None => return false,
            }
        }
        let mut row_order = active.clone();
        row_order.extend((0..rows).filter(|r| !active.contains(r)));
        let mut col_order = pivots.clone();
        col_order.extend((0..cols).filter(|c| !pivots.contains(c)));

        let pick_rows = |m: &BinMatrix| {
            let mut out = BinMatrix::zeros(rows, cols);
            for (new_r, &old_r) in row_order.iter().enumerate() {
                for (new_c, &old_c) in col_order.iter().enumerate() {
                    out.set(new_r, new_c, m.get(old_r, old_c));
                }
            }
            out
        };
        self.x = pick_rows(&self.x);
        self.z = pick_rows(&self.z);
        self.perm = col_order.iter().map(|&c| self.perm[c]).collect();
        true
    }
}

/// Reduces a check matrix to standard form.
///
/// X stage: Gauss-Jordan over the X block, swapping columns only when the
/// current column has no pivot. When that would be needed and the X block
/// already contains a full identity on some column subset (a systematic
/// parity-check layout), those columns are moved to the front instead and no
/// row operations are done. Z stage: Gauss-Jordan over the Z block of the
/// remaining rows, restricted to columns `r..`, same swap rule. Rows `0..r`
/// are not touched by the Z stage, so `C1` is kept as produced.
pub fn to_standard_form(h: &CheckMatrix) -> Result<StandardForm> {
    h.validate()?;
    let (n, m) = (h.n(), h.num_rows());
    let mut red = Reduction { x: h.xblock.clone(), z: h.zblock.clone(), perm: (0..n).collect() };

    let rx = red.x.rank();
    let leading_independent = red.x.submatrix(0, m, 0, rx).rank() == rx;
    let r = if !leading_independent && red.take_systematic_x(rx) {
        rx
    } else {
        red.eliminate(false, 0, 0)
    };
    debug_assert_eq!(r, rx);

    let rz = red.eliminate(true, r, r);
    if r + rz != m {
        return Err(Error::RankDeficient { rank: r + rz, rows: m });
    }

    let hs = CheckMatrix::new_unchecked(red.x, red.z)?;
    let k = n - m;
    let x = hs.xblock();
    let z = hs.zblock();
    let mut sf = StandardForm {
        r,
        perm: red.perm,
        a1: x.submatrix(0, r, r, m),
        a2: x.submatrix(0, r, m, n),
        b: z.submatrix(0, r, 0, r),
        c1: z.submatrix(0, r, r, m),
        c2: z.submatrix(0, r, m, n),
        d: z.submatrix(r, m, 0, r),
        e: z.submatrix(r, m, m, n),
        xlogical: BinMatrix::zeros(k, 2 * n),
        zlogical: BinMatrix::zeros(k, 2 * n),
        hs,
    };
    let (xl, zl) = logical_operators(&sf)?;
    sf.xlogical = xl;
    sf.zlogical = zl;
    Ok(sf)
}

/// Logical operators from the standard-form blocks:
/// `X̄ = [0 Eᵀ I | Eᵀ C1ᵀ + C2ᵀ 0 0]`, `Z̄ = [0 0 0 | A2ᵀ 0 I]`.
pub fn logical_operators(sf: &StandardForm) -> Result<(BinMatrix, BinMatrix)> {
    let n = sf.n();
    let k = sf.k();
    let r = sf.r;
    let m = n - k;
    let shape = |mat: &BinMatrix, rows: usize, cols: usize, name: &str| -> Result<()> {
        if mat.rows() != rows || mat.cols() != cols {
            return Err(Error::Validation(format!(
                "block {name} is {}x{}, expected {rows}x{cols}",
                mat.rows(),
                mat.cols()
            )));
        }
        Ok(())
    };
    shape(&sf.a2, r, k, "A2")?;
    shape(&sf.c1, r, m - r, "C1")?;
    shape(&sf.c2, r, k, "C2")?;
    shape(&sf.e, m - r, k, "E")?;

    let et = sf.e.transpose();
    let v1 = et.mul(&sf.c1.transpose())?.add(&sf.c2.transpose())?;
    let a2t = sf.a2.transpose();

    let mut xl = BinMatrix::zeros(k, 2 * n);
    let mut zl = BinMatrix::zeros(k, 2 * n);
    for i in 0..k {
        for j in 0..m - r {
            xl.set(i, r + j, et.get(i, j));
        }
        xl.set(i, m + i, true);
        for c in 0..r {
            xl.set(i, n + c, v1.get(i, c));
            zl.set(i, n + c, a2t.get(i, c));
        }
        zl.set(i, n + m + i, true);
    }
    Ok((xl, zl))
}

/// CSS check matrix `[H1 ; 0 | 0 ; H2]`; requires `H2 · H1ᵀ = 0`.
pub fn css_check_matrix(h1: &BinMatrix, h2: &BinMatrix) -> Result<CheckMatrix> {
    if h1.cols() != h2.cols() {
        return Err(Error::Dimension { expected: h1.cols(), found: h2.cols() });
    }
    let prod = h2.mul(&h1.transpose())?;
    for i in 0..prod.rows() {
        for j in 0..prod.cols() {
            if prod.get(i, j) {
                return Err(Error::NotDualContaining { h2_row: i, h1_row: j });
            }
        }
    }
    let n = h1.cols();
    let x = h1.vstack(&BinMatrix::zeros(h2.rows(), n))?;
    let z = BinMatrix::zeros(h1.rows(), n).vstack(h2)?;
    CheckMatrix::new(x, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::parse_pauli;

    fn check(rows: &[&str]) -> CheckMatrix {
        let ps: Vec<_> = rows.iter().map(|s| parse_pauli(s).unwrap()).collect();
        CheckMatrix::from_paulis(&ps).unwrap()
    }

    #[test]
    fn rank_and_row_space() {
        let m = BinMatrix::from_strs(&["110", "011"]).unwrap();
        assert_eq!(m.rank(), 2);
        assert!(row_space_contains(&m, &[false, false, false]).unwrap());
        assert!(row_space_contains(&m, &[true, false, true]).unwrap());
        let single = BinMatrix::from_strs(&["110"]).unwrap();
        assert!(!row_space_contains(&single, &[false, false, true]).unwrap());
        assert!(row_space_contains(&single, &[true, true]).is_err());
    }

    #[test]
    fn check_matrix_validation() {
        let ps = [parse_pauli("X").unwrap(), parse_pauli("Z").unwrap()];
        assert!(matches!(
            CheckMatrix::from_paulis(&ps[..1]).map(|h| h.k()),
            Ok(0)
        ));
        let bad = CheckMatrix::from_paulis(&[parse_pauli("XI").unwrap(), parse_pauli("ZI").unwrap()]);
        assert_eq!(bad, Err(Error::NonCommuting(0, 1)));
        let dup = CheckMatrix::from_paulis(&[parse_pauli("ZZI").unwrap(), parse_pauli("ZZI").unwrap()]);
        assert!(matches!(dup, Err(Error::RankDeficient { rank: 1, rows: 2 })));
    }

    #[test]
    fn standard_form_is_fixed_point() {
        let h = check(&["XXXX", "ZZZZ"]);
        let sf = to_standard_form(&h).unwrap();
        let again = to_standard_form(&sf.hs).unwrap();
        assert_eq!(again.hs, sf.hs);
        assert!(again.is_identity_perm());
    }

    #[test]
    fn zero_blocks_give_trivial_logicals() {
        // [[3,1]] with generators X on 0 and Z on 1: E = 0, C = 0, A2 = 0.
        let h = check(&["XII", "IZI"]);
        let sf = to_standard_form(&h).unwrap();
        assert_eq!(sf.r, 1);
        assert!(sf.is_identity_perm());
        assert_eq!(format_symplectic_row(&sf.xlogical, 0), "001|000");
        assert_eq!(format_symplectic_row(&sf.zlogical, 0), "000|001");
    }

    #[test]
    fn css_repetition() {
        let h = BinMatrix::from_strs(&["11"]).unwrap();
        let c = css_check_matrix(&h, &h).unwrap();
        assert_eq!(c.xblock(), &BinMatrix::from_strs(&["11", "00"]).unwrap());
        assert_eq!(c.zblock(), &BinMatrix::from_strs(&["00", "11"]).unwrap());
        assert_eq!(c.k(), 0);

        let h1 = BinMatrix::from_strs(&["10"]).unwrap();
        let h2 = BinMatrix::from_strs(&["11"]).unwrap();
        assert_eq!(
            css_check_matrix(&h1, &h2),
            Err(Error::NotDualContaining { h2_row: 0, h1_row: 0 })
        );
    }
}
