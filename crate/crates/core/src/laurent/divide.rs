use std::collections::BTreeMap;

use num_traits::Zero;

use super::{ExponentVector, LaurentError, LaurentPoly, Rational};

/// Per-coordinate minimum exponent over the support.
fn min_corner(p: &LaurentPoly) -> ExponentVector {
    let n = p.nvars();
    let mut lo = vec![i64::MAX; n];
    for e in p.terms.keys() {
        for (l, &k) in lo.iter_mut().zip(e.iter()) {
            *l = (*l).min(k);
        }
    }
    ExponentVector(lo)
}

/// Divides in the Laurent ring by reducing to ordinary polynomial division.
///
/// Both operands are shifted into the positive orthant with the smallest
/// monomial possible, so the shifted divisor has no variable as a factor.
/// Divisibility in the Laurent ring is then equivalent to divisibility of the
/// shifted polynomials, which a single lex-order division decides: one
/// polynomial is always a Gröbner basis of the ideal it generates.
pub(super) fn exact_divide(p: &LaurentPoly, q: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
    if q.is_zero() {
        return Err(LaurentError::DivisionByZero);
    }
    if p.is_zero() {
        return Ok(LaurentPoly::zero(p.vars.clone()));
    }
    let q_shift = min_corner(q);
    let p_shift = min_corner(p);
    let divisor: BTreeMap<ExponentVector, Rational> =
        q.terms.iter().map(|(e, c)| (e.sub(&q_shift), c.clone())).collect();
    let mut rem: BTreeMap<ExponentVector, Rational> =
        p.terms.iter().map(|(e, c)| (e.sub(&p_shift), c.clone())).collect();

    let (lead_e, lead_c) = divisor.iter().next_back().map(|(e, c)| (e.clone(), c.clone())).unwrap();
    let mut quotient: BTreeMap<ExponentVector, Rational> = BTreeMap::new();

    while let Some((e, c)) = rem.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
        if !e.iter().zip(lead_e.iter()).all(|(a, b)| a >= b) {
            // The leading term can never be cancelled, so a remainder survives.
            return Err(LaurentError::NotDivisible);
        }
        let qe = e.sub(&lead_e);
        let qc = &c / &lead_c;
        for (de, dc) in &divisor {
            let target = de.add(&qe);
            let delta = dc * &qc;
            let entry = rem.entry(target.clone()).or_insert_with(Rational::zero);
            *entry -= delta;
            if entry.is_zero() {
                rem.remove(&target);
            }
        }
        quotient.insert(qe, qc);
    }

    let back = p_shift.sub(&q_shift);
    Ok(LaurentPoly {
        vars: p.vars.clone(),
        terms: quotient.into_iter().map(|(e, c)| (e.add(&back), c)).collect(),
    })
}
