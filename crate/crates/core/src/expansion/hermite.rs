use num_rational::BigRational;

use super::poly::{Coefficient, Polynomial};

/// Probabilists' Hermite polynomial `He_l`.
pub fn hermite(l: usize) -> Polynomial<BigRational> {
    hermite_table(l).pop().expect("table has l + 1 entries")
}

/// `He_0, ..., He_{l_max}` from `He_{l+1} = x He_l - l He_{l-1}`.
pub fn hermite_table(l_max: usize) -> Vec<Polynomial<BigRational>> {
    let mut table = Vec::with_capacity(l_max + 1);
    table.push(Polynomial::constant(BigRational::from_i64(1)));
    if l_max >= 1 {
        table.push(Polynomial::var());
    }
    for l in 1..l_max {
        let next = &table[l].mul_var() - &table[l - 1].scale(&BigRational::from_i64(l as i64));
        table.push(next);
    }
    table
}
