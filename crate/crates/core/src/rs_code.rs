//! Reed-Solomon evaluation codes: the extended code RS*(q, k), the cyclic
//! code RS(q - 1, k) and shortened cyclic codes.
//!
//! # Position layout
//!
//! All variants share one *lifted* layout of length `q`: lifted position 0 is
//! the evaluation at the field element 0 and lifted position `i >= 1` is the
//! evaluation at `alpha^(i - 1)`. The parity-check matrix `H` always has the
//! Vandermonde form of the extended code over this layout, so syndromes,
//! locator roots and reconstruction are computed in lifted coordinates.
//!
//! * `Extended`: every lifted position is transmitted; transmitted row `r` is
//!   lifted position `r`.
//! * `Cyclic`: lifted position 0 is a dummy row that is never transmitted;
//!   transmitted row `r` is lifted position `r + 1`. The receiver assumes the
//!   dummy row is zero, so the true value `p(0)` appears as an error there.
//! * `Shortened(s)`: as `Cyclic`, and additionally the `s` highest lifted
//!   positions are forced to zero by the encoder and never transmitted.
//!
//! Positions are 0-based everywhere.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};
use crate::matrix::{self, Matrix};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Extended,
    Cyclic,
    /// Cyclic code with `s` positions removed.
    Shortened(usize),
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::Extended => "extended",
            Variant::Cyclic => "cyclic",
            Variant::Shortened(_) => "shortened",
        }
    }
}

/// A transmitted codeword of the underlying RS code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    pub symbols: Vec<FieldElement>,
}

/// Parameters of one RS code and the tables derived from them.
#[derive(Clone, Debug)]
pub struct RsSpec {
    field: Arc<Field>,
    k: usize,
    variant: Variant,
    n: usize,
    poly_len: usize,
    syndrome_rows: usize,
    points: Vec<FieldElement>,
    transmitted: Vec<usize>,
    lifted_to_tx: Vec<Option<usize>>,
    // Inverse of the s x s matrix (x_j^e) over the shortened points x_j,
    // used to solve for the top message coefficients.
    shorten_inv: Option<Matrix>,
}

impl PartialEq for RsSpec {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.k == other.k && self.variant == other.variant
    }
}

impl RsSpec {
    pub fn new(field: Arc<Field>, k: usize, variant: Variant) -> Result<RsSpec> {
        let q = field.size();
        let (n, shortened) = match variant {
            Variant::Extended => (q, 0),
            Variant::Cyclic => (q - 1, 0),
            Variant::Shortened(s) => {
                if s + 1 >= q {
                    return Err(Error::CodeParams(format!("cannot shorten by {s} in GF({q})")));
                }
                (q - 1 - s, s)
            }
        };
        if k == 0 || k >= n {
            return Err(Error::CodeParams(format!(
                "dimension k={k} must satisfy 1 <= k < n={n} for the {} code",
                variant.name()
            )));
        }
        let points: Vec<FieldElement> =
            std::iter::once(FieldElement::ZERO).chain((0..q - 1).map(|i| field.exp(i))).collect();
        let transmitted: Vec<usize> = match variant {
            Variant::Extended => (0..q).collect(),
            _ => (1..=n).collect(),
        };
        let mut lifted_to_tx = vec![None; q];
        for (r, &p) in transmitted.iter().enumerate() {
            lifted_to_tx[p] = Some(r);
        }
        let shorten_inv = if shortened > 0 {
            let nodes = &points[q - shortened..];
            let mut v = Matrix::zeros(shortened, shortened);
            for (j, &x) in nodes.iter().enumerate() {
                for e in 0..shortened {
                    v[(j, e)] = field.pow(x, e as u64);
                }
            }
            Some(matrix::inverse(&field, &v)?)
        } else {
            None
        };
        let poly_len = k + shortened;
        Ok(RsSpec {
            syndrome_rows: q - poly_len,
            field,
            k,
            variant,
            n,
            poly_len,
            points,
            transmitted,
            lifted_to_tx,
            shorten_inv,
        })
    }

    /// The DVB-style (204, 188) code over GF(256) with `x^8+x^4+x^3+x^2+1`.
    pub fn dvb_204_188() -> RsSpec {
        RsSpec::new(Arc::new(Field::default()), 188, Variant::Shortened(51)).expect("flagship parameters are valid")
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn field_arc(&self) -> Arc<Field> {
        Arc::clone(&self.field)
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Dimension of the transmitted code.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Transmitted length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Redundancy of the transmitted code, `n - k`.
    pub fn m(&self) -> usize {
        self.n - self.k
    }

    /// Length of the lifted layout (always `q`).
    pub fn lifted_len(&self) -> usize {
        self.points.len()
    }

    /// Number of rows of `H` (and of the syndrome matrix).
    pub fn syndrome_rows(&self) -> usize {
        self.syndrome_rows
    }

    /// Message polynomials have degree below this.
    pub fn poly_len(&self) -> usize {
        self.poly_len
    }

    pub fn shortened(&self) -> usize {
        match self.variant {
            Variant::Shortened(s) => s,
            _ => 0,
        }
    }

    /// Half the minimum distance of the transmitted code, `floor(m / 2)`.
    pub fn t_half(&self) -> usize {
        self.m() / 2
    }

    /// `min(l, m - 1)`: the collaborative row budget (minimum distance minus 2
    /// once `l` is large enough).
    pub fn f_max(&self, l: usize) -> usize {
        l.min(self.m() - 1)
    }

    /// Evaluation points of the lifted layout.
    pub fn lifted_points(&self) -> &[FieldElement] {
        &self.points
    }

    /// Evaluation points of the transmitted positions.
    pub fn points(&self) -> Vec<FieldElement> {
        self.transmitted.iter().map(|&p| self.points[p]).collect()
    }

    /// Lifted position of every transmitted row.
    pub fn transmitted_positions(&self) -> &[usize] {
        &self.transmitted
    }

    pub fn lifted_to_transmitted(&self, pos: usize) -> Option<usize> {
        self.lifted_to_tx.get(pos).copied().flatten()
    }

    /// Lifted position of the untransmitted evaluation at 0, if any.
    pub fn dummy_position(&self) -> Option<usize> {
        match self.variant {
            Variant::Extended => None,
            _ => Some(0),
        }
    }

    pub fn is_shortened_position(&self, pos: usize) -> bool {
        pos >= self.lifted_len() - self.shortened()
    }

    /// Full message polynomial for `info` (lowest degree first): for shortened
    /// codes the top `s` coefficients are chosen so that the polynomial
    /// vanishes on the shortened points.
    pub fn message_poly(&self, info: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if info.len() != self.k {
            return Err(Error::dims(format!("{} information symbols", self.k), info.len()));
        }
        let mut coeffs = info.to_vec();
        if let Some(inv) = &self.shorten_inv {
            let f = &*self.field;
            let s = self.shortened();
            let q = self.lifted_len();
            let nodes = &self.points[q - s..];
            // h(x) with x^k h(x_j) = low(x_j) at every shortened node
            let rhs: Vec<FieldElement> = nodes
                .iter()
                .map(|&x| {
                    let low = f.eval_poly(info, x);
                    f.mul(low, f.inv(f.pow(x, self.k as u64)).expect("nonzero node"))
                })
                .collect();
            coeffs.extend((0..s).map(|e| f.dot(inv.row(e), &rhs)));
        }
        Ok(coeffs)
    }

    /// Evaluations of the message polynomial at every lifted position,
    /// including the true value at the dummy position.
    pub fn encode_lifted(&self, info: &[FieldElement]) -> Result<Vec<FieldElement>> {
        let coeffs = self.message_poly(info)?;
        let f = &*self.field;
        Ok(self.points.iter().map(|&x| f.eval_poly(&coeffs, x)).collect())
    }

    /// Encodes one column: the transmitted evaluations of the polynomial whose
    /// coefficients (lowest degree first) are `info`.
    pub fn encode_column(&self, info: &[FieldElement]) -> Result<Codeword> {
        let coeffs = self.message_poly(info)?;
        let f = &*self.field;
        let symbols = self.transmitted.iter().map(|&p| f.eval_poly(&coeffs, self.points[p])).collect();
        Ok(Codeword { symbols })
    }

    /// Encodes every column of a `k x l` information matrix at once, returning
    /// the transmitted `n x l` word. Same result as [`RsSpec::encode_column`]
    /// per column.
    pub fn encode_matrix(&self, info: &Matrix) -> Result<Matrix> {
        if info.rows() != self.k {
            return Err(Error::dims(format!("{} information rows", self.k), info.rows()));
        }
        let f = &*self.field;
        let l = info.cols();
        let horner = |coeffs: &Matrix, x: FieldElement, acc: &mut [FieldElement]| {
            acc.fill(FieldElement::ZERO);
            for r in (0..coeffs.rows()).rev() {
                f.scale(acc, x);
                for (a, &c) in acc.iter_mut().zip(coeffs.row(r)) {
                    *a += c;
                }
            }
        };
        let coeffs = match &self.shorten_inv {
            None => info.clone(),
            Some(inv) => {
                let s = self.shortened();
                let q = self.lifted_len();
                let mut rhs = Matrix::zeros(s, l);
                for (j, &x) in self.points[q - s..].iter().enumerate() {
                    horner(info, x, rhs.row_mut(j));
                    f.scale(rhs.row_mut(j), f.inv(f.pow(x, self.k as u64)).expect("nonzero node"));
                }
                let high = inv.mul(f, &rhs)?;
                let mut all = Matrix::zeros(self.poly_len, l);
                for r in 0..self.k {
                    all.row_mut(r).copy_from_slice(info.row(r));
                }
                for r in 0..s {
                    all.row_mut(self.k + r).copy_from_slice(high.row(r));
                }
                all
            }
        };
        let mut out = Matrix::zeros(self.n, l);
        for (r, &p) in self.transmitted.iter().enumerate() {
            horner(&coeffs, self.points[p], out.row_mut(r));
        }
        Ok(out)
    }

    /// Inserts the untransmitted rows (dummy, shortened) as zeros.
    pub fn lift_column(&self, transmitted: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if transmitted.len() != self.n {
            return Err(Error::dims(format!("{} transmitted symbols", self.n), transmitted.len()));
        }
        let mut y = vec![FieldElement::ZERO; self.lifted_len()];
        for (&p, &s) in self.transmitted.iter().zip(transmitted) {
            y[p] = s;
        }
        Ok(y)
    }

    /// `H * y` for a lifted column `y`: `s_j = sum_i y_i v_i^j`, `j = 0..rows`.
    pub fn syndromes_column(&self, y: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if y.len() != self.lifted_len() {
            return Err(Error::dims(format!("{} lifted symbols", self.lifted_len()), y.len()));
        }
        let mut s = vec![FieldElement::ZERO; self.syndrome_rows];
        self.accumulate_syndromes(y, &mut s);
        Ok(s)
    }

    pub(crate) fn accumulate_syndromes(&self, y: &[FieldElement], s: &mut [FieldElement]) {
        let f = &*self.field;
        let order = f.order();
        let exp = f.exp_table();
        if let Some(&y0) = y.first() {
            // v_0 = 0 contributes only to s_0 (0^0 = 1)
            s[0] += y0;
        }
        for (i, &yi) in y.iter().enumerate().skip(1) {
            let Some(ly) = f.log(yi) else { continue };
            let lv = i - 1;
            let mut idx = ly;
            for sj in s.iter_mut() {
                sj.0 ^= exp[idx];
                idx += lv;
                if idx >= order {
                    idx -= order;
                }
            }
        }
    }

    /// Checks a transmitted word against the code.
    pub fn is_codeword(&self, transmitted: &[FieldElement]) -> Result<bool> {
        let s = self.syndromes_column(&self.lift_column(transmitted)?)?;
        // With a zero dummy row, s_0 equals p(0); only rows 1.. are checks.
        let skip = usize::from(self.dummy_position().is_some());
        Ok(s[skip..].iter().all(|x| x.is_zero()))
    }

    /// `k x q` matrix whose row `r` is the lifted encoding of the `r`-th unit
    /// information vector.
    pub fn lifted_generator_matrix(&self) -> Matrix {
        let mut g = Matrix::zeros(self.k, self.lifted_len());
        let mut e = vec![FieldElement::ZERO; self.k];
        for r in 0..self.k {
            e[r] = FieldElement::ONE;
            let row = self.encode_lifted(&e).expect("unit vector has length k");
            g.row_mut(r).copy_from_slice(&row);
            e[r] = FieldElement::ZERO;
        }
        g
    }

    /// `k x n` generator matrix on the transmitted positions. For the
    /// extended and cyclic codes row `r` is `(v_i^r)_i`.
    pub fn generator_matrix(&self) -> Matrix {
        let lifted = self.lifted_generator_matrix();
        let mut g = Matrix::zeros(self.k, self.n);
        for r in 0..self.k {
            for (c, &p) in self.transmitted.iter().enumerate() {
                g[(r, c)] = lifted[(r, p)];
            }
        }
        g
    }

    /// `syndrome_rows x q` parity-check matrix, row `r` = `(v_i^r)_i`.
    pub fn parity_check_matrix(&self) -> Matrix {
        let f = &*self.field;
        let mut h = Matrix::zeros(self.syndrome_rows, self.lifted_len());
        for r in 0..self.syndrome_rows {
            for (c, &v) in self.points.iter().enumerate() {
                h[(r, c)] = f.pow(v, r as u64);
            }
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf(w: u32, p: u32) -> Arc<Field> {
        Arc::new(Field::new(w, p).unwrap())
    }

    fn fes(v: &[u16]) -> Vec<FieldElement> {
        v.iter().map(|&x| FieldElement(x)).collect()
    }

    #[test]
    fn layout_examples() {
        let f = gf(3, 0xB);
        let ext = RsSpec::new(f.clone(), 3, Variant::Extended).unwrap();
        assert_eq!((ext.n(), ext.m()), (8, 5));
        assert_eq!(ext.points(), fes(&[0, 1, 2, 4, 3, 6, 7, 5]));
        let cyc = RsSpec::new(f, 3, Variant::Cyclic).unwrap();
        assert_eq!(cyc.n(), 7);
        assert_eq!(cyc.points(), fes(&[1, 2, 4, 3, 6, 7, 5]));

        let dvb = RsSpec::dvb_204_188();
        assert_eq!((dvb.n(), dvb.k(), dvb.m()), (204, 188, 16));
        assert_eq!(dvb.t_half(), 8);
        assert_eq!(dvb.f_max(16), 15);
        assert_eq!(dvb.syndrome_rows(), 17);
    }

    #[test]
    fn rejects_bad_parameters() {
        let f = gf(3, 0xB);
        assert!(RsSpec::new(f.clone(), 0, Variant::Extended).is_err());
        assert!(RsSpec::new(f.clone(), 8, Variant::Extended).is_err());
        assert!(RsSpec::new(f.clone(), 7, Variant::Cyclic).is_err());
        assert!(RsSpec::new(f.clone(), 3, Variant::Shortened(4)).is_err());
        assert!(RsSpec::new(f, 3, Variant::Shortened(3)).is_ok());
    }

    #[test]
    fn generator_rows_match_vandermonde() {
        let f = gf(3, 0xB);
        let g = RsSpec::new(f.clone(), 2, Variant::Extended).unwrap().generator_matrix();
        assert_eq!(g, Matrix::from_u16(&[&[1; 8], &[0, 1, 2, 4, 3, 6, 7, 5]]));
        let g1 = RsSpec::new(f.clone(), 1, Variant::Extended).unwrap().generator_matrix();
        assert_eq!(g1, Matrix::from_u16(&[&[1; 8]]));
        for k in 1..8 {
            let spec = RsSpec::new(f.clone(), k, Variant::Extended).unwrap();
            assert_eq!(spec.generator_matrix().rank(&f), k);
        }
    }

    #[test]
    fn parity_check_shape() {
        let f = gf(3, 0xB);
        let h = RsSpec::new(f.clone(), 3, Variant::Extended).unwrap().parity_check_matrix();
        assert_eq!((h.rows(), h.cols()), (5, 8));
        assert!(h.row(0).iter().all(|&x| x == FieldElement::ONE));
        let h1 = RsSpec::new(f, 7, Variant::Extended).unwrap().parity_check_matrix();
        assert_eq!(h1, Matrix::from_u16(&[&[1; 8]]));
    }

    #[test]
    fn duality_exhaustive_small_fields() {
        for f in [gf(3, 0xB), gf(4, 0x13)] {
            let q = f.size();
            for k in 1..q {
                let spec = RsSpec::new(f.clone(), k, Variant::Extended).unwrap();
                let g = spec.lifted_generator_matrix();
                let h = spec.parity_check_matrix();
                assert!(g.mul(&f, &h.transpose()).unwrap().is_zero(), "q={q} k={k}");
            }
            for k in 1..q - 1 {
                for variant in [Variant::Cyclic, Variant::Shortened(1)] {
                    let Ok(spec) = RsSpec::new(f.clone(), k, variant) else { continue };
                    let g = spec.lifted_generator_matrix();
                    assert!(g.mul(&f, &spec.parity_check_matrix().transpose()).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn encode_examples() {
        let f = gf(3, 0xB);
        let spec = RsSpec::new(f.clone(), 3, Variant::Extended).unwrap();
        let c = spec.encode_column(&fes(&[5, 0, 0])).unwrap();
        assert!(c.symbols.iter().all(|&x| x == FieldElement(5)));
        let c = spec.encode_column(&fes(&[0, 1, 0])).unwrap();
        assert_eq!(c.symbols, spec.points());
        assert!(spec.encode_column(&fes(&[1, 2])).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = spec.parity_check_matrix();
        for _ in 0..50 {
            let info: Vec<_> = (0..3).map(|_| FieldElement(rng.random_range(0..8))).collect();
            let c = spec.encode_column(&info).unwrap();
            let col = Matrix::from_vec(8, 1, c.symbols.clone()).unwrap();
            assert!(h.mul(&f, &col).unwrap().is_zero());
            assert!(spec.is_codeword(&c.symbols).unwrap());
        }
    }

    #[test]
    fn syndromes_match_matrix_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (f, k) in [(gf(3, 0xB), 3), (gf(8, 0x11D), 200)] {
            let spec = RsSpec::new(f.clone(), k, Variant::Extended).unwrap();
            let h = spec.parity_check_matrix();
            let q = f.size();
            for _ in 0..20 {
                let y: Vec<_> = (0..q).map(|_| FieldElement(rng.random_range(0..q as u16))).collect();
                let col = Matrix::from_vec(q, 1, y.clone()).unwrap();
                assert_eq!(spec.syndromes_column(&y).unwrap(), h.mul(&f, &col).unwrap().column(0));
            }
        }
    }

    #[test]
    fn single_error_syndromes() {
        let f = gf(3, 0xB);
        let spec = RsSpec::new(f.clone(), 3, Variant::Extended).unwrap();
        for p in 0..8 {
            let mut y = vec![FieldElement::ZERO; 8];
            y[p] = FieldElement(6);
            let s = spec.syndromes_column(&y).unwrap();
            let v = spec.lifted_points()[p];
            for (j, &sj) in s.iter().enumerate() {
                assert_eq!(sj, f.mul(FieldElement(6), f.pow(v, j as u64)));
            }
        }
    }

    #[test]
    fn minimum_distance_exhaustive_gf8() {
        let f = gf(3, 0xB);
        for k in 1..=3 {
            let spec = RsSpec::new(f.clone(), k, Variant::Extended).unwrap();
            let mut info = vec![FieldElement::ZERO; k];
            let total = 8usize.pow(k as u32);
            for idx in 1..total {
                let mut x = idx;
                for s in info.iter_mut() {
                    *s = FieldElement((x % 8) as u16);
                    x /= 8;
                }
                let c = spec.encode_column(&info).unwrap();
                let weight = c.symbols.iter().filter(|s| !s.is_zero()).count();
                assert!(weight > 8 - k, "k={k} info={info:?}");
            }
        }
    }

    #[test]
    fn cyclic_shift_is_codeword() {
        let f = gf(4, 0x13);
        let spec = RsSpec::new(f, 5, Variant::Cyclic).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let info: Vec<_> = (0..5).map(|_| FieldElement(rng.random_range(0..16))).collect();
            let mut c = spec.encode_column(&info).unwrap().symbols;
            assert!(spec.is_codeword(&c).unwrap());
            c.rotate_left(1);
            assert!(spec.is_codeword(&c).unwrap());
        }
    }

    #[test]
    fn shortened_positions_vanish() {
        let spec = RsSpec::dvb_204_188();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let info: Vec<_> = (0..188).map(|_| FieldElement(rng.random_range(0..256))).collect();
        let lifted = spec.encode_lifted(&info).unwrap();
        assert!(lifted[256 - 51..].iter().all(|s| s.is_zero()));
        assert_eq!(lifted[0], info[0]);
        let c = spec.encode_column(&info).unwrap();
        assert_eq!(c.symbols.len(), 204);
        assert!(spec.is_codeword(&c.symbols).unwrap());
        let mut lifted_zero_dummy = lifted.clone();
        lifted_zero_dummy[0] = FieldElement::ZERO;
        assert_eq!(spec.lift_column(&c.symbols).unwrap(), lifted_zero_dummy);
    }
}
