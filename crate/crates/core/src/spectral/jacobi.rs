//! Cyclic Jacobi eigensolver for dense real symmetric matrices.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{abs, sqrt};

#[derive(Clone, Debug)]
pub struct Eigen {
    /// Eigenvalues in the order the rotations left them on the diagonal.
    pub values: Vec<f64>,
    /// Row-major `n x n`; column `j` is the eigenvector for `values[j]`.
    pub vectors: Option<Vec<f64>>,
    pub sweeps: usize,
    /// Off-diagonal Frobenius norm at exit.
    pub off_norm: f64,
}

/// Off-diagonal Frobenius norm `sqrt(sum_{i != j} a_ij^2)`.
fn off_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        let row = &a[i * n..(i + 1) * n];
        for &x in &row[i + 1..] {
            s += x * x;
        }
    }
    sqrt(2.0 * s)
}

/// One plane rotation `(p, q, c, s)` of the current pivot row.
#[derive(Clone, Copy)]
struct Rot {
    q: usize,
    c: f64,
    s: f64,
}

/// Applies the column half of the logged rotations to one row: entries `p`
/// and `q` of the row mix exactly as the mirrored row update would mix them.
#[inline]
fn apply_columns(row: &mut [f64], p: usize, log: &[Rot]) {
    let mut xp = row[p];
    for r in log {
        let xq = row[r.q];
        row[r.q] = r.s * xp + r.c * xq;
        xp = r.c * xp - r.s * xq;
    }
    row[p] = xp;
}

/// Brings `rows` (at most four) of the row-major `m` up to date with the
/// whole log. Rows are first aligned with the one furthest ahead and then
/// replayed together, so their dependency chains overlap.
fn catch_up(m: &mut [f64], n: usize, p: usize, rows: &[usize], applied: &mut [usize], log: &[Rot]) {
    let start = rows.iter().map(|&k| applied[k]).max().unwrap_or(0);
    for &k in rows {
        apply_columns(&mut m[k * n..(k + 1) * n], p, &log[applied[k]..start]);
        applied[k] = log.len();
    }
    if let &[k0, k1, k2, k3] = rows {
        let o = [k0 * n, k1 * n, k2 * n, k3 * n];
        let mut xp = o.map(|o| m[o + p]);
        for r in &log[start..] {
            for i in 0..4 {
                let xq = m[o[i] + r.q];
                m[o[i] + r.q] = r.s * xp[i] + r.c * xq;
                xp[i] = r.c * xp[i] - r.s * xq;
            }
        }
        for i in 0..4 {
            m[o[i] + p] = xp[i];
        }
    } else {
        for &k in rows {
            apply_columns(&mut m[k * n..(k + 1) * n], p, &log[start..]);
        }
    }
}

/// Replays the log on every row except `skip`, four rows at a time.
fn catch_up_all(
    m: &mut [f64],
    n: usize,
    p: usize,
    skip: Option<usize>,
    applied: &mut [usize],
    log: &[Rot],
) {
    let mut group = [0usize; 4];
    let mut len = 0;
    for k in (0..n).filter(|&k| Some(k) != skip) {
        group[len] = k;
        len += 1;
        if len == 4 {
            catch_up(m, n, p, &group, applied, log);
            len = 0;
        }
    }
    catch_up(m, n, p, &group[..len], applied, log);
}

/// Diagonalizes the symmetric matrix `a` (row-major, consumed) by cyclic
/// Jacobi rotations in row-major upper-triangle order.
///
/// Stops once the off-diagonal norm is at most `tol`; returns `None` if that
/// takes more than `max_sweeps` sweeps. Each sweep visits every pair once.
/// During the first three sweeps only entries above `off / (5 n^2)` are rotated;
/// afterwards entries negligible against both diagonal entries are zeroed.
///
/// Rows are updated eagerly; the matching column updates are logged for the
/// current pivot row and replayed row by row, just before a row is next read
/// and at the end of each pivot row. The arithmetic is the same as updating
/// columns in place, but it walks memory by rows.
pub fn jacobi_eigen(
    mut a: Vec<f64>,
    n: usize,
    want_vectors: bool,
    tol: f64,
    max_sweeps: usize,
) -> Option<Eigen> {
    assert_eq!(a.len(), n * n, "matrix must be n x n");
    let mut v = want_vectors.then(|| {
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        v
    });
    let mut log: Vec<Rot> = Vec::with_capacity(n);
    // Number of log entries already applied to each row.
    let mut applied = vec![0usize; n];
    let mut applied_v = vec![0usize; n];
    let mut sweeps = 0;
    loop {
        let off = off_norm(&a, n);
        if off <= tol {
            let values = (0..n).map(|i| a[i * n + i]).collect();
            return Some(Eigen {
                values,
                vectors: v,
                sweeps,
                off_norm: off,
            });
        }
        if sweeps == max_sweeps {
            return None;
        }
        let thresh = if sweeps < 3 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n.saturating_sub(1) {
            log.clear();
            applied.iter_mut().for_each(|x| *x = 0);
            for q in p + 1..n {
                if (q - p - 1) % 4 == 0 {
                    let rows = [q, q + 1, q + 2, q + 3];
                    catch_up(&mut a, n, p, &rows[..4.min(n - q)], &mut applied, &log);
                } else {
                    catch_up(&mut a, n, p, &[q], &mut applied, &log);
                }
                let apq = a[p * n + q];
                let g = 100.0 * abs(apq);
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                if sweeps > 3 && abs(app) + g == abs(app) && abs(aqq) + g == abs(aqq) {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                if abs(apq) <= thresh || apq == 0.0 {
                    continue;
                }
                let h = aqq - app;
                let t = if abs(h) + g == abs(h) {
                    apq / h
                } else {
                    let theta = 0.5 * h / apq;
                    let t = 1.0 / (abs(theta) + sqrt(1.0 + theta * theta));
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / sqrt(1.0 + t * t);
                let s = t * c;
                rotate_rows(&mut a, n, p, q, c, s, t, apq);
                log.push(Rot { q, c, s });
                applied[q] = log.len();
            }
            if log.is_empty() {
                continue;
            }
            catch_up_all(&mut a, n, p, Some(p), &mut applied, &log);
            if let Some(v) = v.as_mut() {
                applied_v.iter_mut().for_each(|x| *x = 0);
                catch_up_all(v, n, p, None, &mut applied_v, &log);
            }
        }
        sweeps += 1;
    }
}

/// Row half of `J^T A J` for the rotation in the `(p, q)` plane that zeroes
/// `a_pq`; the 2x2 pivot block is set from the closed form.
#[inline]
#[allow(clippy::too_many_arguments)]
fn rotate_rows(a: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64, t: f64, apq: f64) {
    let app = a[p * n + p];
    let aqq = a[q * n + q];
    {
        let (head, tail) = a.split_at_mut(q * n);
        let row_p = &mut head[p * n..(p + 1) * n];
        let row_q = &mut tail[..n];
        for (xp, xq) in row_p.iter_mut().zip(row_q.iter_mut()) {
            let (akp, akq) = (*xp, *xq);
            *xp = c * akp - s * akq;
            *xq = s * akp + c * akq;
        }
    }
    a[p * n + p] = app - t * apq;
    a[q * n + q] = aqq + t * apq;
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(e: &Eigen, n: usize) -> Vec<f64> {
        let v = e.vectors.as_ref().unwrap();
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (0..n)
                    .map(|k| v[i * n + k] * e.values[k] * v[j * n + k])
                    .sum();
            }
        }
        out
    }

    #[test]
    fn two_by_two() {
        let e = jacobi_eigen(vec![2.0, 1.0, 1.0, 2.0], 2, true, 1e-14, 50).unwrap();
        let mut vals = e.values.clone();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((vals[0] - 1.0).abs() < 1e-14 && (vals[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn reconstructs_random_symmetric() {
        let n = 12;
        let mut a = vec![0.0; n * n];
        let mut seed = 7u64;
        for i in 0..n {
            for j in i..n {
                seed = seed
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let x = ((seed >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
                a[i * n + j] = x;
                a[j * n + i] = x;
            }
        }
        let e = jacobi_eigen(a.clone(), n, true, 1e-13, 100).unwrap();
        let back = reconstruct(&e, n);
        for (x, y) in a.iter().zip(&back) {
            assert!((x - y).abs() < 1e-12);
        }
        let v = e.vectors.unwrap();
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = (0..n).map(|k| v[k * n + i] * v[k * n + j]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-13);
            }
        }
    }

    /// Textbook in-place version: every rotation updates rows and columns.
    fn eager(mut a: Vec<f64>, n: usize, tol: f64) -> (Vec<f64>, Vec<f64>) {
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        let mut sweeps = 0;
        while off_norm(&a, n) > tol {
            let off = off_norm(&a, n);
            let thresh = if sweeps < 3 {
                0.2 * off / (n * n) as f64
            } else {
                0.0
            };
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let apq = a[p * n + q];
                    let g = 100.0 * apq.abs();
                    let (app, aqq) = (a[p * n + p], a[q * n + q]);
                    if sweeps > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                        a[p * n + q] = 0.0;
                        a[q * n + p] = 0.0;
                        continue;
                    }
                    if apq.abs() <= thresh || apq == 0.0 {
                        continue;
                    }
                    let h = aqq - app;
                    let t = if h.abs() + g == h.abs() {
                        apq / h
                    } else {
                        let theta = 0.5 * h / apq;
                        let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                        if theta < 0.0 {
                            -t
                        } else {
                            t
                        }
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    rotate_rows(&mut a, n, p, q, c, s, t, apq);
                    for k in 0..n {
                        if k != p && k != q {
                            a[k * n + p] = a[p * n + k];
                            a[k * n + q] = a[q * n + k];
                        }
                        let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
            sweeps += 1;
        }
        ((0..n).map(|i| a[i * n + i]).collect(), v)
    }

    #[test]
    fn deferred_columns_match_in_place_updates_bitwise() {
        let n = 30;
        let mut a = vec![0.0; n * n];
        let mut seed = 11u64;
        for i in 0..n {
            for j in i..n {
                seed = seed
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let x = ((seed >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
                a[i * n + j] = x;
                a[j * n + i] = x;
            }
        }
        let e = jacobi_eigen(a.clone(), n, true, 1e-12, 100).unwrap();
        let (values, vectors) = eager(a, n, 1e-12);
        assert_eq!(e.values, values);
        assert_eq!(e.vectors.unwrap(), vectors);
    }

    #[test]
    fn sweep_budget_exhaustion() {
        let a = vec![1.0, 2.0, 0.5, 2.0, -1.0, 0.3, 0.5, 0.3, 4.0];
        assert!(jacobi_eigen(a, 3, false, 0.0, 0).is_none());
    }
}
