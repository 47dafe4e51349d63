//! Interleaved RS words, row-error patterns and the error channel.
//!
//! An interleaved word is an `n x l` matrix whose `l` columns are codewords of
//! the same RS code. A burst on the channel corrupts a whole row, i.e. the
//! same position of every column.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};
use crate::matrix::Matrix;
use crate::rs_code::RsSpec;

/// A transmitted interleaved codeword (`n` transmitted rows by `l` columns).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrsWord {
    data: Matrix,
}

impl IrsWord {
    pub fn from_matrix(data: Matrix) -> IrsWord {
        IrsWord { data }
    }

    pub fn n(&self) -> usize {
        self.data.rows()
    }

    pub fn l(&self) -> usize {
        self.data.cols()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.data
    }

    pub fn into_matrix(self) -> Matrix {
        self.data
    }
}

/// Channel output `Y = A + E`; arbitrary contents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReceivedWord {
    data: Matrix,
}

impl ReceivedWord {
    pub fn from_matrix(data: Matrix) -> ReceivedWord {
        ReceivedWord { data }
    }

    pub fn n(&self) -> usize {
        self.data.rows()
    }

    pub fn l(&self) -> usize {
        self.data.cols()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.data
    }

    pub fn into_matrix(self) -> Matrix {
        self.data
    }
}

impl From<IrsWord> for ReceivedWord {
    fn from(w: IrsWord) -> Self {
        ReceivedWord { data: w.data }
    }
}

/// Sorted support `F` and the corresponding nonzero error rows `E_F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorPattern {
    support: Vec<usize>,
    rows: Matrix,
}

impl ErrorPattern {
    pub fn empty(l: usize) -> ErrorPattern {
        ErrorPattern { support: Vec::new(), rows: Matrix::zeros(0, l) }
    }

    /// Builds a pattern from `(row index, error row)` pairs in any order.
    /// Rejects duplicate indices and zero rows.
    pub fn new(mut entries: Vec<(usize, Vec<FieldElement>)>, l: usize) -> Result<ErrorPattern> {
        entries.sort_by_key(|(i, _)| *i);
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Pattern("duplicate row index".into()));
        }
        if let Some((i, _)) = entries.iter().find(|(_, r)| r.iter().all(|x| x.is_zero())) {
            return Err(Error::Pattern(format!("row {i} is zero")));
        }
        let support = entries.iter().map(|(i, _)| *i).collect();
        let rows: Vec<Vec<FieldElement>> = entries.into_iter().map(|(_, r)| r).collect();
        let rows = if rows.is_empty() { Matrix::zeros(0, l) } else { Matrix::from_rows(&rows)? };
        if rows.cols() != l {
            return Err(Error::dims(format!("{l} columns"), rows.cols()));
        }
        Ok(ErrorPattern { support, rows })
    }

    /// The nonzero rows of `e`.
    pub fn from_error_matrix(e: &Matrix) -> ErrorPattern {
        let support = e.nonzero_rows();
        let rows = e.select_rows(&support);
        ErrorPattern { support, rows }
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn rows(&self) -> &Matrix {
        &self.rows
    }

    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn l(&self) -> usize {
        self.rows.cols()
    }

    /// The full `n x l` error matrix.
    pub fn to_matrix(&self, n: usize) -> Matrix {
        let mut e = Matrix::zeros(n, self.l());
        for (i, &r) in self.support.iter().enumerate() {
            e.row_mut(r).copy_from_slice(self.rows.row(i));
        }
        e
    }

    pub fn rank(&self, field: &Field) -> usize {
        self.rows.rank(field)
    }
}

/// Encodes column `i` of `info` (`k x l`) into column `i` of the result.
pub fn encode_irs(info: &Matrix, spec: &RsSpec) -> Result<IrsWord> {
    if info.rows() != spec.k() || info.cols() == 0 {
        return Err(Error::dims(format!("{}xl information matrix with l >= 1", spec.k()), info.shape()));
    }
    Ok(IrsWord { data: spec.encode_matrix(info)? })
}

/// `Y = A + E`. Rows outside the support are left untouched.
pub fn apply_errors(word: &IrsWord, pattern: &ErrorPattern) -> Result<ReceivedWord> {
    if pattern.l() != word.l() {
        return Err(Error::dims(format!("{} columns", word.l()), pattern.l()));
    }
    if let Some(&r) = pattern.support.iter().find(|&&r| r >= word.n()) {
        return Err(Error::Pattern(format!("row {r} out of range for n={}", word.n())));
    }
    let mut data = word.data.clone();
    for (i, &r) in pattern.support.iter().enumerate() {
        for (d, &e) in data.row_mut(r).iter_mut().zip(pattern.rows.row(i)) {
            *d += e;
        }
    }
    Ok(ReceivedWord { data })
}

/// How [`sample_error_pattern`] chooses rows.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum ErrorMode {
    /// Exactly `f` rows, uniform support, uniform nonzero rows.
    FixedF(usize),
    /// As `FixedF`, re-drawing rows until the `f` rows are linearly independent.
    FixedFIndependent(usize),
    /// Each row corrupted independently with probability `p`.
    BernoulliRows(f64),
    /// `f` rows, two of which are identical.
    DependentRows(usize),
}

impl ErrorMode {
    pub fn validate(&self, n: usize, l: usize) -> Result<()> {
        match *self {
            ErrorMode::FixedF(f) if f > n => Err(Error::Pattern(format!("f={f} exceeds n={n}"))),
            ErrorMode::FixedFIndependent(f) if f > n || f > l => {
                Err(Error::Pattern(format!("cannot draw {f} independent rows of length {l} in {n} positions")))
            }
            ErrorMode::DependentRows(f) if f < 2 || f > n => {
                Err(Error::Pattern(format!("dependent mode needs 2 <= f <= n, got f={f}")))
            }
            ErrorMode::BernoulliRows(p) if !(0.0..=1.0).contains(&p) => {
                Err(Error::Pattern(format!("row probability {p} outside [0, 1]")))
            }
            _ => Ok(()),
        }
    }
}

/// A row drawn uniformly from the `q^l - 1` nonzero vectors.
pub fn random_nonzero_row<R: Rng + ?Sized>(field: &Field, l: usize, rng: &mut R) -> Vec<FieldElement> {
    let q = field.size() as u32;
    loop {
        let row: Vec<FieldElement> = (0..l).map(|_| FieldElement(rng.random_range(0..q) as u16)).collect();
        if row.iter().any(|x| !x.is_zero()) {
            return row;
        }
    }
}

/// Uniformly random `f`-subset of `0..n`, sorted.
pub fn random_support<R: Rng + ?Sized>(n: usize, f: usize, rng: &mut R) -> Vec<usize> {
    let mut s = rand::seq::index::sample(rng, n, f).into_vec();
    s.sort_unstable();
    s
}

pub fn sample_error_pattern<R: Rng + ?Sized>(
    field: &Field,
    n: usize,
    l: usize,
    mode: ErrorMode,
    rng: &mut R,
) -> Result<ErrorPattern> {
    mode.validate(n, l)?;
    let (support, rows) = match mode {
        ErrorMode::FixedF(f) => {
            let support = random_support(n, f, rng);
            let rows = (0..f).map(|_| random_nonzero_row(field, l, rng)).collect();
            (support, rows)
        }
        ErrorMode::FixedFIndependent(f) => {
            let support = random_support(n, f, rng);
            (support, independent_rows(field, f, l, rng))
        }
        ErrorMode::BernoulliRows(p) => {
            let support: Vec<usize> = (0..n).filter(|_| rng.random_bool(p)).collect();
            let rows = support.iter().map(|_| random_nonzero_row(field, l, rng)).collect();
            (support, rows)
        }
        ErrorMode::DependentRows(f) => {
            let support = random_support(n, f, rng);
            let mut rows: Vec<Vec<FieldElement>> = (0..f - 1).map(|_| random_nonzero_row(field, l, rng)).collect();
            let src = rng.random_range(0..f - 1);
            let dst = rng.random_range(0..f);
            let dup = rows[src].clone();
            rows.insert(dst, dup);
            (support, rows)
        }
    };
    ErrorPattern::new(support.into_iter().zip(rows).collect(), l)
}

fn independent_rows<R: Rng + ?Sized>(field: &Field, f: usize, l: usize, rng: &mut R) -> Vec<Vec<FieldElement>> {
    let mut rows: Vec<Vec<FieldElement>> = Vec::with_capacity(f);
    while rows.len() < f {
        let cand = random_nonzero_row(field, l, rng);
        rows.push(cand);
        let m = Matrix::from_rows(&rows).expect("rows share length l");
        if m.rank(field) < rows.len() {
            rows.pop();
        }
    }
    rows
}

/// Matrix text format: a header line `n l q`, then `n` lines of `l`
/// space-separated lowercase hex symbols.
pub fn format_matrix(m: &Matrix, q: usize) -> String {
    let mut out = format!("{} {} {}\n", m.rows(), m.cols(), q);
    for r in 0..m.rows() {
        let line: Vec<String> = m.row(r).iter().map(|s| format!("{:x}", s.0)).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Parses the matrix text format; errors name the 1-based line and column.
/// Returns the matrix and the field size from the header.
pub fn parse_matrix(text: &str) -> Result<(Matrix, usize)> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, column: 1, msg: "missing header".into() })?;
    let fields = tokens(header);
    if fields.len() != 3 {
        return Err(Error::Parse { line: hline + 1, column: 1, msg: "header must be `n l q`".into() });
    }
    let mut dims = [0usize; 3];
    for (d, (col, tok)) in dims.iter_mut().zip(&fields) {
        *d = tok.parse().map_err(|_| Error::Parse {
            line: hline + 1,
            column: col + 1,
            msg: format!("invalid header integer `{tok}`"),
        })?;
    }
    let [n, l, q] = dims;
    if !q.is_power_of_two() || !(4..=65536).contains(&q) {
        return Err(Error::Parse {
            line: hline + 1,
            column: fields[2].0 + 1,
            msg: format!("field size {q} is not 2^w, 2 <= w <= 16"),
        });
    }
    let mut data = Vec::with_capacity(n * l);
    let mut count = 0;
    for (idx, line) in lines {
        if count == n {
            return Err(Error::Parse { line: idx + 1, column: 1, msg: format!("more than {n} rows") });
        }
        let toks = tokens(line);
        if toks.len() != l {
            return Err(Error::Parse {
                line: idx + 1,
                column: 1,
                msg: format!("expected {l} symbols, found {}", toks.len()),
            });
        }
        for (col, tok) in toks {
            let v = u32::from_str_radix(tok, 16).ok().filter(|&v| (v as usize) < q).ok_or_else(|| Error::Parse {
                line: idx + 1,
                column: col + 1,
                msg: format!("invalid symbol `{tok}` for q={q}"),
            })?;
            data.push(FieldElement(v as u16));
        }
        count += 1;
    }
    if count != n {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            column: 1,
            msg: format!("expected {n} rows, found {count}"),
        });
    }
    Ok((Matrix::from_vec(n, l, data)?, q))
}

// (0-based char offset, token)
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out
}

/// Raw format: row-major, one byte per symbol (fields with `q <= 256`).
pub fn matrix_to_raw(m: &Matrix) -> Vec<u8> {
    m.data().iter().map(|s| s.0 as u8).collect()
}

pub fn matrix_from_raw(bytes: &[u8], rows: usize, cols: usize) -> Result<Matrix> {
    Matrix::from_vec(rows, cols, bytes.iter().map(|&b| FieldElement(b as u16)).collect())
}
