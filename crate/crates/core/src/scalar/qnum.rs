use super::{QExp, QField};

/// `[n]_{q^d} = (q^{dn} - q^{-dn}) / (q^d - q^{-d})`, expanded as a Laurent sum.
pub fn qint<F: QField>(n: i64, d: QExp) -> F {
    if n == 0 {
        return F::zero();
    }
    let m = n.abs();
    let mut acc = F::zero();
    for j in 0..m {
        acc = acc + F::q_pow(d * (m - 1 - 2 * j));
    }
    if n < 0 {
        -acc
    } else {
        acc
    }
}

/// `[n]_{q^d}!`; `n >= 0`.
pub fn qfact<F: QField>(n: u32, d: QExp) -> F {
    let mut acc = F::one();
    for k in 1..=n as i64 {
        acc = acc * qint::<F>(k, d);
    }
    acc
}

/// Balanced quantum binomial `[n choose k]_{q^d}`, a Laurent polynomial.
pub fn qbinom<F: QField>(n: u32, k: u32, d: QExp) -> F {
    if k > n {
        return F::zero();
    }
    // [m, j] = q^{-dj} [m-1, j] + q^{d(m-j)} [m-1, j-1]
    let mut row: Vec<F> = vec![F::one()];
    for m in 1..=n as i64 {
        let mut next = Vec::with_capacity(m as usize + 1);
        for j in 0..=m {
            let a = if j < m { row[j as usize].mul_q_pow(d * (-j)) } else { F::zero() };
            let b = if j > 0 { row[j as usize - 1].mul_q_pow(d * (m - j)) } else { F::zero() };
            next.push(a + b);
        }
        row = next;
    }
    row.swap_remove(k as usize)
}
