//! Hermite and Smith normal forms with unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Row Hermite normal form: returns `(h, u)` with `u` unimodular and `h = u * a`.
///
/// Pivots are positive, rows are in echelon form with strictly increasing
/// pivot columns, zero rows come last, and every entry above a pivot lies in
/// `[0, pivot)`.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let m = a.nrows();
    let n = a.ncols();
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        // Fold every lower entry of this column into row r.
        for i in r + 1..m {
            if h[(i, c)].is_zero() {
                continue;
            }
            if h[(r, c)].is_zero() {
                h.swap_rows(r, i);
                u.swap_rows(r, i);
                continue;
            }
            let a_rc = h[(r, c)].clone();
            let a_ic = h[(i, c)].clone();
            let eg = a_rc.extended_gcd(&a_ic);
            let g = eg.gcd;
            let (x, y) = (eg.x, eg.y);
            let z = -(&a_ic / &g);
            let w = &a_rc / &g;
            h.combine_rows(r, i, &x, &y, &z, &w);
            u.combine_rows(r, i, &x, &y, &z, &w);
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let p = h[(r, c)].clone();
        for i in 0..r {
            let q = h[(i, c)].div_floor(&p);
            if !q.is_zero() {
                let nq = -q;
                h.add_row_multiple(i, r, &nq);
                u.add_row_multiple(i, r, &nq);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Pivot columns of a matrix in row Hermite normal form.
pub fn hnf_pivots(h: &IntMatrix) -> Vec<usize> {
    (0..h.nrows())
        .filter_map(|i| h.row(i).iter().position(|x| !x.is_zero()))
        .collect()
}

/// Whether `h` satisfies the row-HNF conventions used by [`hnf`].
pub fn is_hnf(h: &IntMatrix) -> bool {
    let mut last: Option<usize> = None;
    let mut seen_zero = false;
    for i in 0..h.nrows() {
        match h.row(i).iter().position(|x| !x.is_zero()) {
            None => seen_zero = true,
            Some(c) => {
                if seen_zero || last.is_some_and(|l| c <= l) || !h[(i, c)].is_positive() {
                    return false;
                }
                for k in 0..i {
                    let e = &h[(k, c)];
                    if e.is_negative() || e >= &h[(i, c)] {
                        return false;
                    }
                }
                last = Some(c);
            }
        }
    }
    true
}

/// Smith normal form: returns `(s, u, v)` with `u`, `v` unimodular and
/// `s = u * a * v` diagonal, nonnegative, with each diagonal entry dividing the next.
pub fn snf(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let m = a.nrows();
    let n = a.ncols();
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let k = m.min(n);
    let mut t = 0;
    while t < k {
        // Smallest nonzero entry of the remaining block as pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if s[(i, j)].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..m {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let p = s[(t, t)].clone();
                let q = s[(i, t)].div_floor(&p);
                let nq = -q;
                s.add_row_multiple(i, t, &nq);
                u.add_row_multiple(i, t, &nq);
                if !s[(i, t)].is_zero() {
                    s.swap_rows(t, i);
                    u.swap_rows(t, i);
                    clean = false;
                }
            }
            for j in t + 1..n {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let p = s[(t, t)].clone();
                let q = s[(t, j)].div_floor(&p);
                let nq = -q;
                s.add_col_multiple(j, t, &nq);
                v.add_col_multiple(j, t, &nq);
                if !s[(t, j)].is_zero() {
                    s.swap_cols(t, j);
                    v.swap_cols(t, j);
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: pull a violating row into row t and reduce again.
            let p = s[(t, t)].clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !s[(i, j)].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    (s, u, v)
}

/// Nonzero diagonal entries of a Smith form.
pub fn elementary_divisors(s: &IntMatrix) -> Vec<BigInt> {
    (0..s.nrows().min(s.ncols()))
        .map(|i| s[(i, i)].clone())
        .filter(|d| !d.is_zero())
        .collect()
}

/// Whether `s` is diagonal with a nonnegative divisibility chain.
pub fn is_snf(s: &IntMatrix) -> bool {
    for i in 0..s.nrows() {
        for j in 0..s.ncols() {
            if i != j && !s[(i, j)].is_zero() {
                return false;
            }
        }
    }
    let diag: Vec<&BigInt> = (0..s.nrows().min(s.ncols())).map(|i| &s[(i, i)]).collect();
    if diag.iter().any(|d| d.is_negative()) {
        return false;
    }
    diag.windows(2).all(|w| {
        if w[0].is_zero() {
            w[1].is_zero()
        } else {
            w[1].is_multiple_of(w[0])
        }
    })
}
