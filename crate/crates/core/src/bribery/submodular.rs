//! Submodular set function minimization: exhaustive search for small ground
//! sets, Wolfe's minimum-norm-point method on the base polytope otherwise.

use nalgebra::{DMatrix, DVector};

use super::{BriberyError, EXHAUSTIVE_LIMIT};

#[derive(Clone, Debug, PartialEq)]
pub struct SetMinimum {
    pub set: Vec<bool>,
    /// `f(set)`, not normalized.
    pub value: f64,
}

/// Minimizes a submodular `f` over subsets of `0..n` (given as membership
/// flags). `f` must be finite everywhere.
pub fn minimize_submodular<F>(n: usize, mut f: F) -> Result<SetMinimum, BriberyError>
where
    F: FnMut(&[bool]) -> f64,
{
    if n <= EXHAUSTIVE_LIMIT {
        minimize_exhaustive(n, &mut f)
    } else {
        minimize_min_norm_point(n, &mut f)
    }
}

fn checked(x: f64, base: f64) -> Result<f64, BriberyError> {
    let y = x - base;
    if y.is_finite() {
        Ok(y)
    } else {
        Err(BriberyError::BadOracleValue(y))
    }
}

/// First minimizer in mask order.
pub fn minimize_exhaustive<F>(n: usize, mut f: F) -> Result<SetMinimum, BriberyError>
where
    F: FnMut(&[bool]) -> f64,
{
    assert!(n < 63, "exhaustive search over {n} elements");
    let mut set = vec![false; n];
    let base = f(&set);
    checked(base, 0.0)?;
    let mut best = (0.0, 0u64);
    for mask in 1u64..(1u64 << n) {
        for (i, s) in set.iter_mut().enumerate() {
            *s = mask >> i & 1 == 1;
        }
        let y = checked(f(&set), base)?;
        if y < best.0 {
            best = (y, mask);
        }
    }
    let set: Vec<bool> = (0..n).map(|i| best.1 >> i & 1 == 1).collect();
    Ok(SetMinimum { set, value: best.0 + base })
}

/// Greedy vertex of the base polytope minimizing `<w, q>`, with ties in `w`
/// broken by index. Also returns the insertion order.
fn greedy<F>(n: usize, f: &mut F, base: f64, w: &[f64]) -> Result<(Vec<f64>, Vec<usize>), BriberyError>
where
    F: FnMut(&[bool]) -> f64,
{
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| w[a].total_cmp(&w[b]).then(a.cmp(&b)));
    let mut set = vec![false; n];
    let mut q = vec![0.0; n];
    let mut prev = 0.0;
    for &i in &order {
        set[i] = true;
        let cur = checked(f(&set), base)?;
        q[i] = cur - prev;
        prev = cur;
    }
    Ok((q, order))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Affine combination of `points` with minimum norm: weights summing to 1.
fn affine_min_norm(points: &[Vec<f64>]) -> Option<Vec<f64>> {
    let k = points.len();
    let mut a = DMatrix::<f64>::zeros(k + 1, k + 1);
    for i in 0..k {
        for j in 0..=i {
            let d = dot(&points[i], &points[j]);
            a[(i, j)] = d;
            a[(j, i)] = d;
        }
        a[(i, k)] = 1.0;
        a[(k, i)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(k + 1);
    rhs[k] = 1.0;
    let sol = a.lu().solve(&rhs)?;
    let alpha: Vec<f64> = sol.iter().take(k).copied().collect();
    alpha.iter().all(|x| x.is_finite()).then_some(alpha)
}

/// Wolfe's minimum-norm-point algorithm. The minimizer is read off the
/// best prefix of the elements sorted by their coordinate in the final point.
pub fn minimize_min_norm_point<F>(n: usize, mut f: F) -> Result<SetMinimum, BriberyError>
where
    F: FnMut(&[bool]) -> f64,
{
    let empty = vec![false; n];
    let base = f(&empty);
    checked(base, 0.0)?;
    if n == 0 {
        return Ok(SetMinimum { set: empty, value: base });
    }
    let (q0, _) = greedy(n, &mut f, base, &vec![0.0; n])?;
    let scale = q0.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let eps = 1e-12 * scale * scale * n as f64;
    let mut points = vec![q0];
    let mut lambda = vec![1.0];
    let mut x = points[0].clone();
    for _major in 0..10_000 {
        let (q, _) = greedy(n, &mut f, base, &x)?;
        if dot(&x, &x) - dot(&x, &q) <= eps {
            break;
        }
        if points.iter().any(|p| p == &q) {
            break;
        }
        points.push(q);
        lambda.push(0.0);
        loop {
            let Some(alpha) = affine_min_norm(&points) else {
                // Numerically dependent corral: keep the current point.
                points.pop();
                lambda.pop();
                break;
            };
            if alpha.iter().all(|&a| a > 1e-12) {
                lambda = alpha;
                break;
            }
            // Move from lambda toward alpha until a weight hits zero.
            let mut theta = 1.0f64;
            for (l, a) in lambda.iter().zip(&alpha) {
                if *a <= 1e-12 && l - a > 0.0 {
                    theta = theta.min(l / (l - a));
                }
            }
            for (l, a) in lambda.iter_mut().zip(&alpha) {
                *l = (1.0 - theta) * *l + theta * a;
            }
            let mut k = 0;
            while k < points.len() {
                if lambda[k] <= 1e-12 {
                    points.remove(k);
                    lambda.remove(k);
                } else {
                    k += 1;
                }
            }
            let total: f64 = lambda.iter().sum();
            lambda.iter_mut().for_each(|l| *l /= total);
            if points.len() == 1 {
                break;
            }
        }
        x = vec![0.0; n];
        for (p, l) in points.iter().zip(&lambda) {
            for (xi, pi) in x.iter_mut().zip(p) {
                *xi += l * pi;
            }
        }
    }
    // Prefixes of the ascending order of x, including the empty set.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then(a.cmp(&b)));
    let mut set = vec![false; n];
    let mut best = (0.0, 0usize);
    for (k, &i) in order.iter().enumerate() {
        set[i] = true;
        let y = checked(f(&set), base)?;
        if y < best.0 - 1e-12 * scale {
            best = (y, k + 1);
        }
    }
    let mut set = vec![false; n];
    for &i in &order[..best.1] {
        set[i] = true;
    }
    Ok(SetMinimum { set, value: best.0 + base })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_function() {
        let w = [-1.0, 2.0, -3.0];
        let f = |s: &[bool]| s.iter().zip(&w).filter(|(b, _)| **b).map(|(_, x)| x).sum::<f64>();
        let r = minimize_submodular(3, f).unwrap();
        assert_eq!(r.set, vec![true, false, true]);
        assert_eq!(r.value, -4.0);
        let r = minimize_min_norm_point(3, f).unwrap();
        assert_eq!(r.set, vec![true, false, true]);
        assert!((r.value + 4.0).abs() < 1e-9);
    }

    #[test]
    fn constant_zero_gives_empty_set() {
        let r = minimize_submodular(4, |_| 0.0).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.set, vec![false; 4]);
        let r = minimize_min_norm_point(4, |_| 0.0).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn rejects_nan() {
        assert!(matches!(
            minimize_submodular(2, |s| if s[0] { f64::NAN } else { 0.0 }),
            Err(BriberyError::BadOracleValue(_))
        ));
    }

    /// Cut function of a weighted graph plus a modular term.
    fn cut_plus_modular(n: usize, seed: u64) -> impl Fn(&[bool]) -> f64 {
        let mut s = seed | 1;
        let mut rnd = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            s
        };
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rnd() % 3 == 0 {
                    edges.push((a, b, (rnd() % 5 + 1) as f64));
                }
            }
        }
        let w: Vec<f64> = (0..n).map(|_| (rnd() % 11) as f64 - 6.0).collect();
        move |set: &[bool]| {
            let cut: f64 = edges.iter().filter(|(a, b, _)| set[*a] != set[*b]).map(|e| e.2).sum();
            let m: f64 = (0..n).filter(|&i| set[i]).map(|i| w[i]).sum();
            cut + m
        }
    }

    #[test]
    fn min_norm_point_matches_exhaustive_on_cut_functions() {
        for seed in 1..60u64 {
            let n = 2 + (seed % 11) as usize;
            let f = cut_plus_modular(n, seed * 7919);
            let a = minimize_exhaustive(n, &f).unwrap();
            let b = minimize_min_norm_point(n, &f).unwrap();
            assert!((a.value - b.value).abs() < 1e-6, "seed {seed}: {} vs {}", a.value, b.value);
        }
    }
}
