//! Independent integer oracles. Nothing here goes through the library's
//! rational arithmetic: a pairing value on `Z(n_1) x ... x Z(n_k)` is the
//! residue `sum c_i x_i (L / n_i) mod L` over `L = lcm n_i`.
#![allow(dead_code)]

use num_integer::Integer;

pub fn lcm_all(orders: &[i64]) -> i64 {
    orders.iter().fold(1, |acc, n| acc.lcm(n))
}

/// Numerator `r ∈ [0, L)` of `chi(x) = r / L`.
pub fn residue(orders: &[i64], chi: &[i64], x: &[i64]) -> (i64, i64) {
    let l = lcm_all(orders);
    let r = orders.iter().zip(chi).zip(x).map(|((n, c), a)| c * a * (l / n)).sum::<i64>();
    (r.rem_euclid(l), l)
}

/// `|chi(x)| <= 1/4`.
pub fn in_t_plus(orders: &[i64], chi: &[i64], x: &[i64]) -> bool {
    let (r, l) = residue(orders, chi, x);
    4 * r.min(l - r) <= l
}

/// `|chi(x)| < num/den`.
pub fn in_arc(orders: &[i64], chi: &[i64], x: &[i64], num: i64, den: i64) -> bool {
    let (r, l) = residue(orders, chi, x);
    r.min(l - r) * den < num * l
}

/// All coordinate tuples, lexicographically.
pub fn tuples(orders: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &n in orders {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |a| {
                    let mut t = t.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn polar(orders: &[i64], set: &[Vec<i64>]) -> Vec<Vec<i64>> {
    tuples(orders).into_iter().filter(|c| set.iter().all(|x| in_t_plus(orders, c, x))).collect()
}

pub fn dense(orders: &[i64], set: &[Vec<i64>]) -> bool {
    polar(orders, set).iter().all(|c| c.iter().all(|&v| v == 0))
}

/// `W(X, (-num/den, num/den)) = {0}`.
pub fn w_trivial(orders: &[i64], set: &[Vec<i64>], num: i64, den: i64) -> bool {
    tuples(orders)
        .iter()
        .filter(|c| c.iter().any(|&v| v != 0))
        .all(|c| set.iter().any(|x| !in_arc(orders, c, x, num, den)))
}

/// `y = M x` reduced in the target.
pub fn apply(matrix: &[Vec<i64>], target: &[i64], x: &[i64]) -> Vec<i64> {
    matrix
        .iter()
        .zip(target)
        .map(|(row, m)| row.iter().zip(x).map(|(a, b)| a * b).sum::<i64>().rem_euclid(*m))
        .collect()
}
