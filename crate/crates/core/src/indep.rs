//! Column-by-column bounded-distance decoding, the classical baseline that
//! corrects up to `floor((n - k) / 2)` errors in each column.
//!
//! Uses Peterson-Gorenstein-Zierler on the syndrome sequence
//! `sigma_j = sum_i e_i X_i^(j-1)`: the largest `nu <= t` whose Hankel system
//! `sigma_(j+nu) = sum_u lambda_u sigma_(j+u-1)` is non-singular gives the
//! error count. For the extended code the sequence is rows `0..m` of `H`; for
//! cyclic and shortened codes it is rows `1..=m`, which ignore the dummy
//! position.

use crate::error::{Error, Result};
use crate::gf::FieldElement;
use crate::irs::{IrsWord, ReceivedWord};
use crate::matrix::{self, Matrix};
use crate::rs_code::RsSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColumnOutcome {
    Corrected {
        /// Transmitted symbols after correction.
        codeword: Vec<FieldElement>,
        /// Transmitted positions and the error value removed at each.
        errors: Vec<(usize, FieldElement)>,
    },
    Failure,
}

/// Decodes one lifted column (`q` symbols; dummy and shortened entries zero).
pub fn decode_column(y: &[FieldElement], spec: &RsSpec) -> Result<ColumnOutcome> {
    let field = spec.field();
    let all = spec.syndromes_column(y)?;
    let m = spec.m();
    let first_row = usize::from(spec.dummy_position().is_some());
    let sigma = &all[first_row..first_row + m];
    let extract =
        |y: &[FieldElement]| -> Vec<FieldElement> { spec.transmitted_positions().iter().map(|&p| y[p]).collect() };
    if sigma.iter().all(|s| s.is_zero()) {
        return Ok(ColumnOutcome::Corrected { codeword: extract(y), errors: Vec::new() });
    }
    let candidates: Vec<usize> = spec.transmitted_positions().to_vec();
    for nu in (1..=spec.t_half()).rev() {
        let mut hankel = Matrix::zeros(nu, nu);
        let mut rhs = Matrix::zeros(nu, 1);
        for j in 0..nu {
            for u in 0..nu {
                hankel[(j, u)] = sigma[j + u];
            }
            rhs[(j, 0)] = sigma[j + nu];
        }
        let lambda = match matrix::solve(field, &hankel, &rhs) {
            Ok(x) => x.column(0),
            Err(Error::Singular) => continue,
            Err(e) => return Err(e),
        };
        // Lambda(x) = x^nu + sum lambda_u x^(u-1)
        let mut locator = lambda;
        locator.push(FieldElement::ONE);
        let roots: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|&p| field.eval_poly(&locator, spec.lifted_points()[p]).is_zero())
            .collect();
        if roots.len() != nu {
            return Ok(ColumnOutcome::Failure);
        }
        // values from the first nu rows of the sequence, then check all m
        let pts: Vec<FieldElement> = roots.iter().map(|&p| spec.lifted_points()[p]).collect();
        let row_power = |v: FieldElement, j: usize| field.pow(v, (first_row + j) as u64);
        let mut vand = Matrix::zeros(nu, nu);
        for j in 0..nu {
            for (i, &v) in pts.iter().enumerate() {
                vand[(j, i)] = row_power(v, j);
            }
        }
        let b = Matrix::from_vec(nu, 1, sigma[..nu].to_vec())?;
        let values = match matrix::solve(field, &vand, &b) {
            Ok(x) => x.column(0),
            Err(Error::Singular) => return Ok(ColumnOutcome::Failure),
            Err(e) => return Err(e),
        };
        if values.iter().any(|v| v.is_zero()) {
            return Ok(ColumnOutcome::Failure);
        }
        let explains = (0..m).all(|j| {
            let s =
                pts.iter().zip(&values).fold(FieldElement::ZERO, |acc, (&v, &e)| acc + field.mul(e, row_power(v, j)));
            s == sigma[j]
        });
        if !explains {
            return Ok(ColumnOutcome::Failure);
        }
        let mut fixed = y.to_vec();
        for (&p, &e) in roots.iter().zip(&values) {
            fixed[p] += e;
        }
        let errors = roots
            .iter()
            .zip(&values)
            .map(|(&p, &e)| (spec.lifted_to_transmitted(p).expect("candidate is transmitted"), e))
            .collect();
        return Ok(ColumnOutcome::Corrected { codeword: extract(&fixed), errors });
    }
    Ok(ColumnOutcome::Failure)
}

/// Decodes a transmitted column of `spec.n()` symbols.
pub fn decode_transmitted_column(y: &[FieldElement], spec: &RsSpec) -> Result<ColumnOutcome> {
    decode_column(&spec.lift_column(y)?, spec)
}

/// Decodes every column independently; `None` if any column fails.
pub fn decode_word(raw: &ReceivedWord, spec: &RsSpec) -> Result<Option<IrsWord>> {
    if raw.n() != spec.n() {
        return Err(Error::dims(format!("{} received rows", spec.n()), raw.n()));
    }
    let mut out = Matrix::zeros(spec.n(), raw.l());
    for c in 0..raw.l() {
        match decode_transmitted_column(&raw.matrix().column(c), spec)? {
            ColumnOutcome::Corrected { codeword, .. } => out.set_column(c, &codeword),
            ColumnOutcome::Failure => return Ok(None),
        }
    }
    Ok(Some(IrsWord::from_matrix(out)))
}
