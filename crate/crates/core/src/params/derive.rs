use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{IntersectionArray, ParamError};
use crate::algebra::{int, Rational};

/// Combinatorial parameters determined by an intersection array.
#[derive(Clone, Debug, Serialize)]
pub struct ParameterSet {
    pub array: IntersectionArray,
    /// `a_0..a_d`
    pub a: Vec<u64>,
    /// Valencies `k_0..k_d`.
    pub k: Vec<u64>,
    pub n: u64,
    /// `p[i][j][h]` is `p_{ij}^h`.
    #[serde(skip)]
    pub p: Vec<Vec<Vec<u64>>>,
}

impl ParameterSet {
    pub fn diameter(&self) -> usize {
        self.array.diameter()
    }

    pub fn b(&self, i: usize) -> u64 {
        self.array.b(i)
    }

    pub fn c(&self, i: usize) -> u64 {
        self.array.c(i)
    }

    pub fn p(&self, i: usize, j: usize, h: usize) -> u64 {
        self.p[i][j][h]
    }

    /// `"1 + 6 + 30 + 20"`
    pub fn partition_string(&self) -> String {
        self.k.iter().map(u64::to_string).collect::<Vec<_>>().join(" + ")
    }
}

/// Valencies `k_{i+1} = k_i b_i / c_{i+1}`; fails at the first non-integral one.
pub fn valencies(arr: &IntersectionArray) -> Result<Vec<u64>, ParamError> {
    let d = arr.diameter();
    let mut k = vec![1u64];
    for i in 0..d {
        let num = k[i] as u128 * arr.b(i) as u128;
        let den = arr.c(i + 1) as u128;
        if !num.is_multiple_of(den) {
            return Err(ParamError::NonIntegralValency {
                index: i + 1,
                value: format!("{}/{}", num / gcd(num, den), den / gcd(num, den)),
            });
        }
        let v = num / den;
        k.push(u64::try_from(v).map_err(|_| ParamError::Overflow)?);
    }
    Ok(k)
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Coefficients of `A · X` in the basis `A_0..A_d`, where `X = Σ v_j A_j`.
fn mul_adjacency(arr: &IntersectionArray, v: &[Rational]) -> Vec<Rational> {
    let d = arr.diameter();
    let mut out = vec![Rational::zero(); d + 1];
    for (j, vj) in v.iter().enumerate() {
        if vj.is_zero() {
            continue;
        }
        if j > 0 {
            out[j - 1] += vj * int(arr.b(j - 1) as i64);
        }
        out[j] += vj * int(arr.a(j));
        if j < d {
            out[j + 1] += vj * int(arr.c(j + 1) as i64);
        }
    }
    out
}

/// All intersection numbers `p_{ij}^h` as exact rationals, computed from
/// `A_{i+1} = (A A_i − a_i A_i − b_{i−1} A_{i−1}) / c_{i+1}` applied to each
/// basis element `A_j`.
pub fn intersection_numbers(arr: &IntersectionArray) -> Vec<Vec<Vec<Rational>>> {
    let d = arr.diameter();
    // p[i][j][h]
    let mut p = vec![vec![Vec::new(); d + 1]; d + 1];
    for j in 0..=d {
        let mut prev: Vec<Rational> = vec![Rational::zero(); d + 1];
        let mut cur: Vec<Rational> = vec![Rational::zero(); d + 1];
        cur[j] = Rational::one();
        p[0][j] = cur.clone();
        for i in 0..d {
            let ax = mul_adjacency(arr, &cur);
            let ci1 = int(arr.c(i + 1) as i64);
            let ai = int(arr.a(i));
            let bim1 = if i == 0 { Rational::zero() } else { int(arr.b(i - 1) as i64) };
            let next: Vec<Rational> = (0..=d).map(|h| (&ax[h] - &ai * &cur[h] - &bim1 * &prev[h]) / &ci1).collect();
            p[i + 1][j] = next.clone();
            prev = std::mem::replace(&mut cur, next);
        }
    }
    p
}

enum IntFailure {
    Overflow,
    /// First entry, in evaluation order, that is not an integer.
    Fraction {
        i: usize,
        j: usize,
        h: usize,
        num: i128,
        den: i128,
    },
}

fn ovf<T>(x: Option<T>) -> Result<T, IntFailure> {
    x.ok_or(IntFailure::Overflow)
}

/// Same recurrence as [`intersection_numbers`] in `i128`. Any non-integral
/// entry already makes the array infeasible, so the first one is reported
/// instead of finishing the computation.
fn intersection_numbers_int(arr: &IntersectionArray) -> Result<Vec<Vec<Vec<i128>>>, IntFailure> {
    let d = arr.diameter();
    let a: Vec<i128> = (0..=d).map(|i| arr.a(i) as i128).collect();
    let b = |i: usize| arr.b(i) as i128;
    let c = |i: usize| arr.c(i) as i128;
    let mut p = vec![vec![Vec::new(); d + 1]; d + 1];
    for j in 0..=d {
        let mut prev = vec![0i128; d + 1];
        let mut cur = vec![0i128; d + 1];
        cur[j] = 1;
        p[0][j] = cur.clone();
        for i in 0..d {
            let mut ax = vec![0i128; d + 1];
            for (t, &vt) in cur.iter().enumerate() {
                if vt == 0 {
                    continue;
                }
                if t > 0 {
                    ax[t - 1] = ovf(vt.checked_mul(b(t - 1)).and_then(|x| x.checked_add(ax[t - 1])))?;
                }
                ax[t] = ovf(vt.checked_mul(a[t]).and_then(|x| x.checked_add(ax[t])))?;
                if t < d {
                    ax[t + 1] = ovf(vt.checked_mul(c(t + 1)).and_then(|x| x.checked_add(ax[t + 1])))?;
                }
            }
            let bim1 = if i == 0 { 0 } else { b(i - 1) };
            let mut next = Vec::with_capacity(d + 1);
            for h in 0..=d {
                let num = ovf(a[i]
                    .checked_mul(cur[h])
                    .and_then(|x| ax[h].checked_sub(x))
                    .and_then(|x| bim1.checked_mul(prev[h]).and_then(|y| x.checked_sub(y))))?;
                if num % c(i + 1) != 0 {
                    return Err(IntFailure::Fraction { i: i + 1, j, h, num, den: c(i + 1) });
                }
                next.push(num / c(i + 1));
            }
            p[i + 1][j] = next.clone();
            prev = std::mem::replace(&mut cur, next);
        }
    }
    Ok(p)
}

fn exact_fallback(arr: &IntersectionArray, a: Vec<u64>, k: Vec<u64>, n: u64) -> Result<ParameterSet, ParamError> {
    let d = arr.diameter();
    let pr = intersection_numbers(arr);
    let mut p = vec![vec![vec![0u64; d + 1]; d + 1]; d + 1];
    for i in 0..=d {
        for j in 0..=d {
            for h in 0..=d {
                let v = &pr[i][j][h];
                if !v.is_integer() || v.is_negative() {
                    return Err(ParamError::BadIntersectionNumber { i, j, h, value: v.to_string() });
                }
                p[i][j][h] = v.to_integer().to_u64().ok_or(ParamError::Overflow)?;
            }
        }
    }
    Ok(ParameterSet { array: arr.clone(), a, k, n, p })
}

/// Derives every combinatorial parameter of a (structurally valid) array.
pub fn derive_parameters(arr: &IntersectionArray) -> Result<ParameterSet, ParamError> {
    let violations = arr.shape_violations();
    if !violations.is_empty() {
        return Err(ParamError::Shape(violations.join("; ")));
    }
    let d = arr.diameter();
    let k = valencies(arr)?;
    let n = k.iter().try_fold(0u64, |acc, &x| acc.checked_add(x)).ok_or(ParamError::Overflow)?;
    let a: Vec<u64> = (0..=d).map(|i| arr.a(i) as u64).collect();
    let pr = match intersection_numbers_int(arr) {
        Ok(pr) => pr,
        Err(IntFailure::Fraction { i, j, h, num, den }) => {
            let value = num_rational::Ratio::new(num, den).to_string();
            return Err(ParamError::BadIntersectionNumber { i, j, h, value });
        }
        Err(IntFailure::Overflow) => return exact_fallback(arr, a, k, n),
    };
    let mut p = vec![vec![vec![0u64; d + 1]; d + 1]; d + 1];
    for i in 0..=d {
        for j in 0..=d {
            for h in 0..=d {
                let v = pr[i][j][h];
                if v < 0 {
                    return Err(ParamError::BadIntersectionNumber { i, j, h, value: v.to_string() });
                }
                p[i][j][h] = u64::try_from(v).map_err(|_| ParamError::Overflow)?;
            }
        }
    }
    Ok(ParameterSet { array: arr.clone(), a, k, n, p })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(s: &str) -> ParameterSet {
        derive_parameters(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn valencies_and_order() {
        let p = ps("{6,5,2;1,1,3}");
        assert_eq!(p.k, vec![1, 6, 30, 20]);
        assert_eq!(p.n, 57);
        let p = ps("{5,4,2;1,1,4}");
        assert_eq!(p.k, vec![1, 5, 20, 10]);
        assert_eq!(p.n, 36);
        assert_eq!(p.partition_string(), "1 + 5 + 20 + 10");
    }

    #[test]
    fn p_tensor_structure() {
        let p = ps("{6,4,2;1,2,3}");
        let d = 3;
        for j in 0..=d {
            for h in 0..=d {
                assert_eq!(p.p(0, j, h), u64::from(j == h));
            }
        }
        for h in 0..d {
            assert_eq!(p.p(1, h + 1, h), p.b(h));
            assert_eq!(p.p(1, h, h + 1), p.c(h + 1));
        }
        // H(3,3): p_{11}^2 = c_2 = 2
        assert_eq!(p.p(1, 1, 2), 2);
        assert_eq!(p.p(1, 1, 1), p.a[1]);
    }

    #[test]
    fn non_integral_valency_reports_index() {
        let arr: IntersectionArray = "{5,4,1;1,3,5}".parse().unwrap();
        match derive_parameters(&arr) {
            Err(ParamError::NonIntegralValency { index, .. }) => assert_eq!(index, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_intersection_number_detected() {
        let arr: IntersectionArray = "{4,1,1;1,1,2}".parse().unwrap();
        let r = derive_parameters(&arr);
        assert!(matches!(r, Err(ParamError::BadIntersectionNumber { .. })), "{r:?}");
    }
}
