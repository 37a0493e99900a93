use super::poly::Ring;

/// Complete Bell polynomials `B_0, ..., B_{j_max}` evaluated at `z_1, z_2, ...`
/// in any commutative ring.
///
/// Uses `B_{m+1} = sum_{i=0}^{m} C(m, i) B_{m-i} z_{i+1}`, which costs
/// `O(j_max^2)` ring operations. `z[0]` holds `z_1`.
pub fn bell_polynomials<R: Ring>(z: &[R], j_max: usize) -> Vec<R> {
    assert!(z.len() >= j_max, "need z_1..z_{j_max}, got {} values", z.len());
    let mut b: Vec<R> = Vec::with_capacity(j_max + 1);
    b.push(R::one());
    for m in 0..j_max {
        let mut next = R::zero();
        let mut binom: u64 = 1;
        for i in 0..=m {
            next = next + (b[m - i].clone() * z[i].clone()).times(binom);
            binom = binom * (m - i) as u64 / (i + 1) as u64;
        }
        b.push(next);
    }
    b
}

/// `B_j(z_1, ..., z_j)`.
pub fn bell_combination<R: Ring>(z: &[R], j: usize) -> R {
    bell_polynomials(z, j).pop().expect("j + 1 entries")
}
