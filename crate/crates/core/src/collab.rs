//! Collaborative decoding of interleaved RS words.
//!
//! All `l` syndrome columns are stacked into one `(q - k') x l` matrix `S`
//! (`k'` the message polynomial length). If the `f` error rows are linearly
//! independent and `f <= min(l, rows(S) - 1)`, the first `f` rows of `S` are
//! independent and row `f + 1` is the combination `sum_j lambda_j S_j` whose
//! coefficients are exactly those of the error locator
//! `Lambda(x) = x^f - sum_j lambda_j x^(j-1)`. The coefficients are read off
//! after Gauss-Jordan elimination with column operations, which leave row
//! dependencies intact.
//!
//! Decoding runs in the lifted layout of [`RsSpec`]: cyclic and shortened
//! words get a zero dummy row (and zero shortened rows) prepended/appended
//! before the syndromes are formed. A nonzero `p(0)` then shows up as one more
//! error at the dummy position, which is repaired and discarded.

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};
use crate::irs::{IrsWord, ReceivedWord};
use crate::matrix::{self, Matrix};
use crate::rs_code::RsSpec;

/// Why the decoder declined to produce a codeword.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FailureReason {
    /// Every row of `S` is independent of the rows above it.
    TooManyErrors,
    /// A later row of `S` leaves the span found for the locator.
    RankMismatch,
    /// The locator does not have `deg` distinct roots among the positions.
    NotTValid,
    /// The reconstructed errors do not explain all syndromes, or land on
    /// positions that were never transmitted.
    Inconsistent,
}

impl FailureReason {
    pub const ALL: [FailureReason; 4] = [
        FailureReason::TooManyErrors,
        FailureReason::RankMismatch,
        FailureReason::NotTValid,
        FailureReason::Inconsistent,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FailureReason::TooManyErrors => "TooManyErrors",
            FailureReason::RankMismatch => "RankMismatch",
            FailureReason::NotTValid => "NotTValid",
            FailureReason::Inconsistent => "Inconsistent",
        }
    }
}

impl std::fmt::Display for FailureReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// `S = H * Y` over the lifted layout; row `j` holds the `j`-th syndrome of
/// every column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyndromeMatrix {
    s: Matrix,
}

impl SyndromeMatrix {
    pub fn from_matrix(s: Matrix) -> SyndromeMatrix {
        SyndromeMatrix { s }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.s
    }

    pub fn rows(&self) -> usize {
        self.s.rows()
    }

    pub fn cols(&self) -> usize {
        self.s.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.s.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocatorResult {
    pub f_hat: usize,
    /// `lambda[j - 1]` is the coefficient of row `j` in the dependency.
    pub lambda: Vec<FieldElement>,
    /// Monic `Lambda(x)`, lowest degree first, length `f_hat + 1`.
    pub locator: Vec<FieldElement>,
}

impl LocatorResult {
    fn from_lambda(lambda: Vec<FieldElement>) -> LocatorResult {
        // characteristic 2: x^f - sum lambda_j x^(j-1) = x^f + sum lambda_j x^(j-1)
        let mut locator = lambda.clone();
        locator.push(FieldElement::ONE);
        LocatorResult { f_hat: lambda.len(), lambda, locator }
    }

    pub fn eval(&self, field: &Field, x: FieldElement) -> FieldElement {
        field.eval_poly(&self.locator, x)
    }
}

/// The `f x f` Vandermonde block `K` (first `f` rows of `H` on the columns in
/// `F`) and the next row `mu`. `mu = sum_j lambda_j K_j` defines the locator
/// directly from a known support.
#[derive(Clone, Debug)]
pub struct VandermondeSystem {
    pub k: Matrix,
    pub mu: Vec<FieldElement>,
}

impl VandermondeSystem {
    /// `support` holds lifted positions.
    pub fn new(spec: &RsSpec, support: &[usize]) -> VandermondeSystem {
        let field = spec.field();
        let f = support.len();
        let pts: Vec<FieldElement> = support.iter().map(|&p| spec.lifted_points()[p]).collect();
        let mut k = Matrix::zeros(f, f);
        for j in 0..f {
            for (i, &v) in pts.iter().enumerate() {
                k[(j, i)] = field.pow(v, j as u64);
            }
        }
        let mu = pts.iter().map(|&v| field.pow(v, f as u64)).collect();
        VandermondeSystem { k, mu }
    }

    /// Solves `K^T lambda = mu`.
    pub fn lambda(&self, field: &Field) -> Result<Vec<FieldElement>> {
        let f = self.mu.len();
        let rhs = Matrix::from_vec(f, 1, self.mu.clone())?;
        Ok(matrix::solve(field, &self.k.transpose(), &rhs)?.column(0))
    }
}

/// A successful decode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    /// The corrected transmitted word.
    pub word: IrsWord,
    /// Corrected transmitted rows, ascending.
    pub support: Vec<usize>,
    /// Error row for each entry of `support`.
    pub error_rows: Matrix,
    /// Corrected lifted positions, including a repaired dummy row.
    pub lifted_support: Vec<usize>,
    pub locator: LocatorResult,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeOutcome {
    Success(Decoded),
    DetectedFailure(FailureReason),
}

impl DecodeOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, DecodeOutcome::Success(_))
    }

    pub fn word(&self) -> Option<&IrsWord> {
        match self {
            DecodeOutcome::Success(d) => Some(&d.word),
            DecodeOutcome::DetectedFailure(_) => None,
        }
    }

    pub fn failure(&self) -> Option<FailureReason> {
        match self {
            DecodeOutcome::Success(_) => None,
            DecodeOutcome::DetectedFailure(r) => Some(*r),
        }
    }
}

/// Inserts the untransmitted dummy and shortened rows as zeros, producing a
/// `q`-row word.
pub fn lift_received(raw: &ReceivedWord, spec: &RsSpec) -> Result<ReceivedWord> {
    if raw.n() != spec.n() {
        return Err(Error::dims(format!("{} received rows", spec.n()), raw.n()));
    }
    if spec.lifted_len() == spec.n() {
        return Ok(raw.clone());
    }
    let mut y = Matrix::zeros(spec.lifted_len(), raw.l());
    for (r, &p) in spec.transmitted_positions().iter().enumerate() {
        y.row_mut(p).copy_from_slice(raw.matrix().row(r));
    }
    Ok(ReceivedWord::from_matrix(y))
}

/// `S = H * Y` for a lifted word `Y` (`q` rows).
pub fn syndrome_matrix(y: &ReceivedWord, spec: &RsSpec) -> Result<SyndromeMatrix> {
    if y.n() != spec.lifted_len() {
        return Err(Error::dims(format!("{} lifted rows", spec.lifted_len()), y.n()));
    }
    let field = spec.field();
    let rows = spec.syndrome_rows();
    let mut s = Matrix::zeros(rows, y.l());
    let ym = y.matrix();
    // v_0 = 0 only reaches row 0
    for (d, &x) in s.row_mut(0).iter_mut().zip(ym.row(0)) {
        *d += x;
    }
    for i in 1..y.n() {
        let yrow = ym.row(i);
        if yrow.iter().all(|x| x.is_zero()) {
            continue;
        }
        let v = spec.lifted_points()[i];
        let mut coef = FieldElement::ONE;
        for j in 0..rows {
            field.add_scaled(s.row_mut(j), yrow, coef);
            coef = field.mul(coef, v);
        }
    }
    Ok(SyndromeMatrix { s })
}

// Column-echelon reduction of the top-left `rows x cols` block of `s`.
// Stored transposed: column c of the block is `work.row(c)`, so column
// operations become contiguous row operations.
struct Echelon {
    work: Matrix,
    pivots: Vec<usize>,
    is_pivot: Vec<bool>,
    dependent_row: Option<usize>,
}

impl Echelon {
    fn reduce(field: &Field, s: &Matrix, rows: usize, cols: usize) -> Echelon {
        let mut work = Matrix::zeros(cols, rows);
        for r in 0..rows {
            for c in 0..cols {
                work[(c, r)] = s[(r, c)];
            }
        }
        let mut pivots = Vec::new();
        let mut is_pivot = vec![false; cols];
        let mut dependent_row = None;
        for r in 0..rows {
            let Some(p) = (0..cols).find(|&c| !is_pivot[c] && !work[(c, r)].is_zero()) else {
                dependent_row = Some(r);
                break;
            };
            let inv = field.inv(work[(p, r)]).expect("pivot is nonzero");
            field.scale(work.row_mut(p), inv);
            let pivot_col = work.row(p).to_vec();
            for c in 0..cols {
                let a = work[(c, r)];
                if c != p && !a.is_zero() {
                    field.add_scaled(work.row_mut(c), &pivot_col, a);
                }
            }
            is_pivot[p] = true;
            pivots.push(p);
        }
        Echelon { work, pivots, is_pivot, dependent_row }
    }

    fn lambda(&self, r: usize) -> Vec<FieldElement> {
        self.pivots.iter().map(|&p| self.work[(p, r)]).collect()
    }

    fn in_span(&self, r: usize) -> bool {
        (0..self.is_pivot.len()).all(|c| self.is_pivot[c] || self.work[(c, r)].is_zero())
    }
}

fn locate_block(field: &Field, s: &Matrix, cols: usize) -> std::result::Result<LocatorResult, FailureReason> {
    let rows = s.rows();
    let ech = Echelon::reduce(field, s, rows, cols);
    let f_hat = ech.dependent_row.ok_or(FailureReason::TooManyErrors)?;
    if !(f_hat + 1..rows).all(|r| ech.in_span(r)) {
        return Err(FailureReason::RankMismatch);
    }
    Ok(LocatorResult::from_lambda(ech.lambda(f_hat)))
}

/// Finds the smallest `f_hat` such that row `f_hat + 1` of `S` lies in the span
/// of the rows above it, and returns the combination coefficients as the
/// locator. Fails if no such row exists or if rows further down leave that
/// span.
pub fn find_locator(s: &SyndromeMatrix, field: &Field) -> std::result::Result<LocatorResult, FailureReason> {
    locate_block(field, &s.s, s.cols())
}

/// Lifted positions whose evaluation point is a root of the locator.
pub fn chien_roots(locator: &LocatorResult, spec: &RsSpec) -> Vec<usize> {
    let field = spec.field();
    if locator.f_hat == 0 {
        return Vec::new();
    }
    spec.lifted_points().iter().enumerate().filter(|(_, &v)| locator.eval(field, v).is_zero()).map(|(i, _)| i).collect()
}

/// Solves `K E_F = S_[f]` for the error rows on the lifted positions
/// `support`, checks that `H^F E_F` reproduces every row of `S`, and returns
/// the corrected lifted word together with `E_F`. An all-zero recovered row
/// contradicts the locator and counts as inconsistent.
pub fn reconstruct(
    y: &ReceivedWord,
    support: &[usize],
    s: &SyndromeMatrix,
    spec: &RsSpec,
) -> Result<std::result::Result<(Matrix, Matrix), FailureReason>> {
    let field = spec.field();
    let f = support.len();
    let l = s.cols();
    if f >= s.rows() {
        return Err(Error::dims(format!("fewer than {} error positions", s.rows()), f));
    }
    if y.n() != spec.lifted_len() || y.l() != l {
        return Err(Error::dims(format!("{}x{l} lifted word", spec.lifted_len()), y.matrix().shape()));
    }
    let pts: Vec<FieldElement> = support.iter().map(|&p| spec.lifted_points()[p]).collect();
    let mut k = Matrix::zeros(f, f);
    for j in 0..f {
        for (i, &v) in pts.iter().enumerate() {
            k[(j, i)] = field.pow(v, j as u64);
        }
    }
    let e = match matrix::solve(field, &k, &s.s.submatrix(f, l)) {
        Ok(e) => e,
        Err(Error::Singular) => return Ok(Err(FailureReason::Inconsistent)),
        Err(err) => return Err(err),
    };
    if (0..f).any(|i| e.row(i).iter().all(|x| x.is_zero())) {
        return Ok(Err(FailureReason::Inconsistent));
    }
    // rows f.. of H^F E_F against the remaining syndromes
    let mut powers: Vec<FieldElement> = pts.iter().map(|&v| field.pow(v, f as u64)).collect();
    let mut acc = vec![FieldElement::ZERO; l];
    for j in f..s.rows() {
        acc.fill(FieldElement::ZERO);
        for (i, &pw) in powers.iter().enumerate() {
            field.add_scaled(&mut acc, e.row(i), pw);
        }
        if acc != s.s.row(j) {
            return Ok(Err(FailureReason::Inconsistent));
        }
        for (pw, &v) in powers.iter_mut().zip(&pts) {
            *pw = field.mul(*pw, v);
        }
    }
    let mut a = y.matrix().clone();
    for (i, &p) in support.iter().enumerate() {
        for (d, &x) in a.row_mut(p).iter_mut().zip(e.row(i)) {
            *d += x;
        }
    }
    Ok(Ok((a, e)))
}

fn finish(y: &ReceivedWord, s: &SyndromeMatrix, locator: LocatorResult, spec: &RsSpec) -> Result<DecodeOutcome> {
    let roots = chien_roots(&locator, spec);
    if roots.len() != locator.f_hat {
        return Ok(DecodeOutcome::DetectedFailure(FailureReason::NotTValid));
    }
    if roots.iter().any(|&p| spec.is_shortened_position(p)) {
        return Ok(DecodeOutcome::DetectedFailure(FailureReason::Inconsistent));
    }
    let (lifted, e) = match reconstruct(y, &roots, s, spec)? {
        Ok(v) => v,
        Err(reason) => return Ok(DecodeOutcome::DetectedFailure(reason)),
    };
    let mut word = Matrix::zeros(spec.n(), y.l());
    for (r, &p) in spec.transmitted_positions().iter().enumerate() {
        word.row_mut(r).copy_from_slice(lifted.row(p));
    }
    let kept: Vec<usize> = (0..roots.len()).filter(|&i| spec.lifted_to_transmitted(roots[i]).is_some()).collect();
    let support = kept.iter().map(|&i| spec.lifted_to_transmitted(roots[i]).expect("filtered")).collect();
    let error_rows = e.select_rows(&kept);
    Ok(DecodeOutcome::Success(Decoded {
        word: IrsWord::from_matrix(word),
        support,
        error_rows,
        lifted_support: roots,
        locator,
    }))
}

fn trivial_success(raw: &ReceivedWord) -> DecodeOutcome {
    DecodeOutcome::Success(Decoded {
        word: IrsWord::from_matrix(raw.matrix().clone()),
        support: Vec::new(),
        error_rows: Matrix::zeros(0, raw.l()),
        lifted_support: Vec::new(),
        locator: LocatorResult::from_lambda(Vec::new()),
    })
}

/// Decodes a received word of `spec.n()` rows.
///
/// If the error rows are linearly independent and there are at most
/// `min(l, rows(S) - 1)` of them (counting a nonzero dummy row for cyclic and
/// shortened codes), the transmitted word is returned. Every success has
/// passed a full syndrome check.
pub fn decode(raw: &ReceivedWord, spec: &RsSpec) -> Result<DecodeOutcome> {
    let y = lift_received(raw, spec)?;
    let s = syndrome_matrix(&y, spec)?;
    if s.is_zero() {
        return Ok(trivial_success(raw));
    }
    match find_locator(&s, spec.field()) {
        Ok(loc) => finish(&y, &s, loc, spec),
        Err(reason) => Ok(DecodeOutcome::DetectedFailure(reason)),
    }
}

/// Decodes by eliminating growing leading square blocks of `S`.
///
/// Step `i` looks for a row dependency inside the top-left
/// `min(i, rows) x min(i, l)` block. A candidate is tested on the next
/// `check_cols` columns; if it holds, the locator is recomputed on the columns
/// used so far, which also performs the rank check, and decoding proceeds as in
/// [`decode`]. The final step is the whole matrix, so with
/// `check_cols >= l - f_hat` the outcome always equals [`decode`].
pub fn decode_incremental(raw: &ReceivedWord, spec: &RsSpec, check_cols: usize) -> Result<DecodeOutcome> {
    let y = lift_received(raw, spec)?;
    let s = syndrome_matrix(&y, spec)?;
    if s.is_zero() {
        return Ok(trivial_success(raw));
    }
    let field = spec.field();
    let (m, l) = (s.rows(), s.cols());
    let last = m.max(l);
    for i in 1..=last {
        let (rows, cols) = (i.min(m), i.min(l));
        let ech = Echelon::reduce(field, &s.s, rows, cols);
        let Some(f_hat) = ech.dependent_row else { continue };
        let lambda = ech.lambda(f_hat);
        let width = (cols + check_cols).min(l);
        let holds = (cols..width).all(|c| {
            let comb = (0..f_hat).fold(FieldElement::ZERO, |acc, j| acc + field.mul(lambda[j], s.s[(j, c)]));
            comb == s.s[(f_hat, c)]
        });
        if !holds {
            continue;
        }
        return match locate_block(field, &s.s, width) {
            Ok(loc) => {
                debug_assert_eq!(loc.f_hat, f_hat);
                finish(&y, &s, loc, spec)
            }
            Err(reason) => Ok(DecodeOutcome::DetectedFailure(reason)),
        };
    }
    Ok(DecodeOutcome::DetectedFailure(FailureReason::TooManyErrors))
}
