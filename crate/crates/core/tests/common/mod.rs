//! Shared fixtures: reference tables of known arrays, independent oracles and random
//! automorphism generators.

#![allow(dead_code)]

use std::process::{Command, Output};

use drg_core::graphs::{build_named, Graph, NamedGraph, VertexMap};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

/// Core-complete primitive arrays of diameter 3: (vertices, eigenvalues, array).
pub const CORE_COMPLETE: &[(&str, &str, &str)] = &[
    ("v = 57 = 1 + 6 + 30 + 20", "6^{1} 2.618^{18} 0.382^{18} -3^{20}", "{6,5,2;1,1,3}"),
    ("v = 64 = 1 + 7 + 21 + 35", "7^{1} 3^{21} -1^{35} -5^{7}", "{7,6,5;1,2,3}"),
    ("v = 176 = 1 + 7 + 42 + 126", "7^{1} 3^{66} -1^{77} -4^{32}", "{7,6,6;1,1,2}"),
    ("v = 135 = 1 + 8 + 56 + 70", "8^{1} 3^{54} -1^{50} -4^{30}", "{8,7,5;1,1,4}"),
    ("v = 231 = 1 + 10 + 80 + 140", "10^{1} 4^{77} -1^{98} -4^{55}", "{10,8,7;1,1,4}"),
    ("v = 210 = 1 + 11 + 110 + 88", "11^{1} 4^{55} 1^{77} -4^{77}", "{11,10,4;1,1,5}"),
    ("v = 175 = 1 + 12 + 72 + 90", "12^{1} 7^{28} 2^{21} -2^{125}", "{12,6,5;1,1,4}"),
    ("v = 125 = 1 + 12 + 48 + 64", "12^{1} 7^{12} 2^{48} -3^{64}", "{12,8,4;1,2,3}"),
    ("v = 144 = 1 + 13 + 65 + 65", "13^{1} 5^{39} -1^{78} -5^{26}", "{13,10,7;1,2,7}"),
    ("v = 216 = 1 + 15 + 75 + 125", "15^{1} 9^{15} 3^{75} -3^{125}", "{15,10,5;1,2,3}"),
    ("v = 2057 = 1 + 16 + 240 + 1800", "16^{1} 5^{680} -1^{968} -6^{408}", "{16,15,15;1,1,2}"),
    ("v = 324 = 1 + 17 + 136 + 170", "17^{1} 5^{102} -1^{170} -7^{51}", "{17,16,10;1,2,8}"),
    ("v = 343 = 1 + 18 + 108 + 216", "18^{1} 11^{18} 4^{108} -3^{216}", "{18,12,6;1,2,3}"),
    ("v = 532 = 1 + 18 + 270 + 243", "18^{1} 5.623^{171} -1^{189} -4.623^{171}", "{18,15,9;1,1,10}"),
    ("v = 1911 = 1 + 20 + 360 + 1530", "20^{1} 6^{585} -1^{884} -6^{441}", "{20,18,17;1,1,4}"),
    ("v = 120 = 1 + 21 + 63 + 35", "21^{1} 11^{9} 3^{35} -3^{75}", "{21,12,5;1,4,9}"),
    ("v = 512 = 1 + 21 + 147 + 343", "21^{1} 13^{21} 5^{147} -3^{343}", "{21,14,7;1,2,3}"),
    ("v = 330 = 1 + 21 + 168 + 140", "21^{1} 7.325^{77} -1^{175} -5.325^{77}", "{21,16,10;1,2,12}"),
    ("v = 650 = 1 + 22 + 396 + 231", "22^{1} 7^{156} 2^{143} -4^{350}", "{22,18,7;1,1,12}"),
    ("v = 320 = 1 + 22 + 231 + 66", "22^{1} 6^{55} 2^{154} -6^{110}", "{22,21,4;1,2,14}"),
    ("v = 1024 = 1 + 22 + 231 + 770", "22^{1} 6^{330} -2^{616} -10^{77}", "{22,21,20;1,2,6}"),
    ("v = 2048 = 1 + 23 + 253 + 1771", "23^{1} 7^{506} -1^{1288} -9^{253}", "{23,22,21;1,2,3}"),
    ("v = 165 = 1 + 24 + 84 + 56", "24^{1} 13^{10} 4^{44} -3^{110}", "{24,14,6;1,4,9}"),
    ("v = 729 = 1 + 24 + 192 + 512", "24^{1} 15^{24} 6^{192} -3^{512}", "{24,16,8;1,2,3}"),
    ("v = 625 = 1 + 24 + 216 + 384", "24^{1} 9^{120} -1^{384} -6^{120}", "{24,18,16;1,2,9}"),
    ("v = 8526 = 1 + 25 + 500 + 8000", "25^{1} 11^{725} 4^{2900} -4^{4900}", "{25,20,16;1,1,1}"),
];

/// Primitive arrays of diameter 3 with at least one triple for e = 2.
/// (vertices, eigenvalues, array, triples)
pub type TripleRow = (&'static str, &'static str, &'static str, &'static [(u64, u64, u64)]);

pub const WITH_TRIPLES: &[TripleRow] = &[
    ("v = 21 = 1 + 4 + 8 + 8", "4^{1} 2.414^{6} -0.414^{6} -2^{8}", "{4,2,2;1,1,2}", &[(0, 1, 1)]),
    ("v = 36 = 1 + 5 + 20 + 10", "5^{1} 2^{16} -1^{10} -3^{9}", "{5,4,2;1,1,4}", &[(0, 1, 1), (1, 0, 2)]),
    ("v = 56 = 1 + 5 + 20 + 30", "5^{1} 2.414^{20} -0.414^{20} -3^{15}", "{5,4,3;1,1,2}", &[(0, 1, 2)]),
    ("v = 52 = 1 + 6 + 18 + 27", "6^{1} 3.732^{12} 0.268^{12} -2^{27}", "{6,3,3;1,1,2}", &[(0, 1, 2), (1, 0, 3)]),
    ("v = 27 = 1 + 6 + 12 + 8", "6^{1} 3^{6} 0^{12} -3^{8}", "{6,4,2;1,2,3}", &[(0, 1, 1), (1, 0, 2)]),
    ("v = 63 = 1 + 6 + 24 + 32", "6^{1} 3^{21} -1^{27} -3^{14}", "{6,4,4;1,1,3}", &[(0, 2, 2)]),
    ("v = 105 = 1 + 8 + 32 + 64", "8^{1} 5^{20} 1^{20} -2^{64}", "{8,4,4;1,1,2}", &[(0, 1, 3), (1, 0, 4)]),
    ("v = 64 = 1 + 9 + 27 + 27", "9^{1} 5^{9} 1^{27} -3^{27}", "{9,6,3;1,2,3}", &[(0, 1, 2), (1, 0, 3)]),
    ("v = 186 = 1 + 10 + 50 + 125", "10^{1} 6.236^{30} 1.764^{30} -2^{125}", "{10,5,5;1,1,2}", &[(0, 1, 4), (1, 0, 5)]),
    ("v = 65 = 1 + 10 + 30 + 24", "10^{1} 5^{13} 0^{26} -3^{25}", "{10,6,4;1,2,5}", &[(0, 2, 2), (1, 1, 3), (2, 0, 4)]),
    ("v = 364 = 1 + 12 + 108 + 243", "12^{1} 5^{104} -1^{168} -4^{91}", "{12,9,9;1,1,4}", &[(0, 3, 6), (1, 2, 7)]),
    ("v = 456 = 1 + 14 + 98 + 343", "14^{1} 8.646^{56} 3.354^{56} -2^{343}", "{14,7,7;1,1,2}", &[(0, 1, 6), (1, 0, 7)]),
    (
        "v = 255 = 1 + 14 + 112 + 128",
        "14^{1} 7^{51} -1^{119} -3^{84}",
        "{14,8,8;1,1,7}",
        &[(0, 4, 4), (1, 3, 5), (2, 2, 6), (3, 1, 7), (4, 0, 8)],
    ),
    (
        "v = 135 = 1 + 14 + 56 + 64",
        "14^{1} 5^{35} -1^{84} -7^{15}",
        "{14,12,8;1,3,7}",
        &[(0, 4, 4), (1, 3, 5), (2, 2, 6)],
    ),
    ("v = 855 = 1 + 14 + 168 + 672", "14^{1} 5^{266} -1^{399} -5^{189}", "{14,12,12;1,1,3}", &[(0, 3, 9)]),
    (
        "v = 160 = 1 + 15 + 90 + 54",
        "15^{1} 5^{48} -1^{75} -5^{36}",
        "{15,12,6;1,2,10}",
        &[(0, 3, 3), (1, 2, 4), (2, 1, 5), (3, 0, 6)],
    ),
    ("v = 506 = 1 + 15 + 210 + 280", "15^{1} 4^{230} -3^{253} -8^{22}", "{15,14,12;1,1,9}", &[(0, 6, 6), (1, 5, 7)]),
    (
        "v = 657 = 1 + 16 + 128 + 512",
        "16^{1} 9.828^{72} 4.172^{72} -2^{512}",
        "{16,8,8;1,1,2}",
        &[(0, 1, 7), (1, 0, 8)],
    ),
    ("v = 910 = 1 + 18 + 162 + 729", "18^{1} 11^{90} 5^{90} -2^{729}", "{18,9,9;1,1,2}", &[(0, 1, 8), (1, 0, 9)]),
    ("v = 819 = 1 + 18 + 288 + 512", "18^{1} 5^{324} -3^{468} -9^{26}", "{18,16,16;1,1,9}", &[(0, 8, 8)]),
    (
        "v = 324 = 1 + 19 + 152 + 152",
        "19^{1} 7^{57} 1^{152} -5^{114}",
        "{19,16,8;1,2,8}",
        &[(0, 2, 6), (1, 1, 7), (2, 0, 8)],
    ),
    (
        "v = 1365 = 1 + 20 + 320 + 1024",
        "20^{1} 7^{350} -1^{650} -5^{364}",
        "{20,16,16;1,1,5}",
        &[(0, 4, 12), (1, 3, 13), (2, 2, 14)],
    ),
    (
        "v = 792 = 1 + 21 + 420 + 350",
        "21^{1} 5^{315} -1^{252} -6^{224}",
        "{21,20,10;1,1,12}",
        &[(0, 2, 8), (1, 1, 9), (2, 0, 10)],
    ),
    (
        "v = 512 = 1 + 21 + 210 + 280",
        "21^{1} 5^{210} -3^{280} -11^{21}",
        "{21,20,16;1,2,12}",
        &[(0, 8, 8), (1, 7, 9), (2, 6, 10)],
    ),
    (
        "v = 1596 = 1 + 22 + 242 + 1331",
        "22^{1} 13.317^{132} 6.683^{132} -2^{1331}",
        "{22,11,11;1,1,2}",
        &[(0, 1, 10), (1, 0, 11)],
    ),
    (
        "v = 2041 = 1 + 24 + 288 + 1728",
        "24^{1} 14.464^{156} 7.536^{156} -2^{1728}",
        "{24,12,12;1,1,2}",
        &[(0, 1, 11), (1, 0, 12)],
    ),
    (
        "v = 2457 = 1 + 24 + 384 + 2048",
        "24^{1} 11^{324} 3^{468} -3^{1664}",
        "{24,16,16;1,1,3}",
        &[(0, 2, 14), (1, 1, 15), (2, 0, 16)],
    ),
    (
        "v = 256 = 1 + 24 + 126 + 105",
        "24^{1} 8^{42} 0^{168} -8^{45}",
        "{24,21,10;1,4,12}",
        &[(0, 4, 6), (1, 3, 7), (2, 2, 8), (3, 1, 9), (4, 0, 10)],
    ),
    (
        "v = 729 = 1 + 24 + 264 + 440",
        "24^{1} 6^{264} -3^{440} -12^{24}",
        "{24,22,20;1,2,12}",
        &[(0, 10, 10), (1, 9, 11)],
    ),
    (
        "v = 1176 = 1 + 25 + 400 + 750",
        "25^{1} 11^{180} 1^{245} -3^{750}",
        "{25,16,15;1,1,8}",
        &[(0, 3, 12), (1, 2, 13), (2, 1, 14), (3, 0, 15)],
    ),
];

/// The one triples-table entry whose parameters are not integral.
pub const NON_INTEGRAL: &str = "{24,21,10;1,4,12}";

pub fn named(spec: &str) -> Graph {
    build_named(spec.parse::<NamedGraph>().expect("known family")).expect("valid parameters")
}

pub fn drg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drg")).args(args).output().expect("drg binary runs")
}

pub fn parse_array(s: &str) -> (Vec<u64>, Vec<u64>) {
    let inner = s.trim_matches(|c| c == '{' || c == '}');
    let (b, c) = inner.split_once(';').expect("b;c");
    let list = |t: &str| t.split(',').map(|x| x.trim().parse().expect("integer")).collect();
    (list(b), list(c))
}

/// Closed rational interval.
#[derive(Clone, Debug)]
struct Iv {
    lo: BigRational,
    hi: BigRational,
}

impl Iv {
    fn point(x: BigRational) -> Iv {
        Iv { lo: x.clone(), hi: x }
    }

    fn int(n: i64) -> Iv {
        Iv::point(BigRational::from_integer(BigInt::from(n)))
    }

    fn add(&self, o: &Iv) -> Iv {
        Iv { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    fn sub(&self, o: &Iv) -> Iv {
        Iv { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    fn mul(&self, o: &Iv) -> Iv {
        let ps = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = ps.iter().min().unwrap().clone();
        let hi = ps.iter().max().unwrap().clone();
        Iv { lo, hi }
    }

    fn div_int(&self, n: u64) -> Iv {
        let n = BigRational::from_integer(BigInt::from(n));
        Iv { lo: &self.lo / &n, hi: &self.hi / &n }
    }

    fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    fn negative(&self) -> bool {
        self.hi.is_negative()
    }
}

/// `det(xI − L)` for the tridiagonal intersection matrix `L`.
fn char_poly_at(b: &[u64], c: &[u64], x: &BigRational) -> BigRational {
    let d = b.len();
    let k = b[0] as i64;
    let bi = |i: usize| if i < d { b[i] as i64 } else { 0 };
    let ci = |i: usize| if i > 0 { c[i - 1] as i64 } else { 0 };
    let r = |n: i64| BigRational::from_integer(BigInt::from(n));
    let mut prev = r(1);
    let mut cur = x - r(k - bi(0));
    for i in 1..=d {
        let next = (x - r(k - bi(i) - ci(i))) * &cur - r(bi(i - 1) * ci(i)) * &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Smallest eigenvalue to 60 decimal digits, or exactly when it is hit.
fn smallest_eigenvalue(b: &[u64], c: &[u64]) -> Iv {
    let d = b.len();
    let k = b[0] as f64;
    let t = DMatrix::from_fn(d + 1, d + 1, |i, j| {
        if i == j {
            let bi = if i < d { b[i] as f64 } else { 0.0 };
            let ci = if i > 0 { c[i - 1] as f64 } else { 0.0 };
            k - bi - ci
        } else if j == i + 1 {
            (b[i] as f64 * c[i] as f64).sqrt()
        } else if i == j + 1 {
            (b[j] as f64 * c[j] as f64).sqrt()
        } else {
            0.0
        }
    });
    let approx = t.symmetric_eigen().eigenvalues.min();
    let mut lo = BigRational::from_float(approx - 1e-7).unwrap();
    let mut hi = BigRational::from_float(approx + 1e-7).unwrap();
    let sign = |x: &BigRational| char_poly_at(b, c, x).signum();
    let s_lo = sign(&lo);
    assert!(&s_lo * sign(&hi) < BigRational::zero(), "no sign change around {approx}");
    let eps = BigRational::new(BigInt::from(1), BigInt::from(10).pow(61));
    while &hi - &lo > eps {
        let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
        let s = sign(&mid);
        if s.is_zero() {
            return Iv::point(mid);
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Iv { lo, hi }
}

/// Brute-force recheck of the triple search for `e = 2` on a diameter-3
/// array using 60-digit interval arithmetic. `None` when the cosines of the
/// smallest eigenvalue do not alternate in sign up to `w(2)`.
pub fn recheck_triples(b: &[u64], c: &[u64]) -> Option<Vec<(u64, u64, u64)>> {
    let d = b.len();
    assert_eq!(d, 3, "rechecker covers diameter 3");
    let e = 2;
    let k = b[0];
    let bi = |i: usize| if i < d { b[i] } else { 0 };
    let ci = |i: usize| if i > 0 { c[i - 1] } else { 0 };
    let a = |i: usize| k - bi(i) - ci(i);
    let theta = smallest_eigenvalue(b, c);

    let mut w = vec![Iv::int(1), theta.div_int(k)];
    for r in 1..d {
        let next = theta.sub(&Iv::int(a(r) as i64)).mul(&w[r]).sub(&w[r - 1].mul(&Iv::int(ci(r) as i64)));
        w.push(next.div_int(bi(r)));
    }
    w.push(Iv::int(0));
    if !(1..=e).all(|r| w[r - 1].mul(&w[r]).negative()) {
        return None;
    }

    let bipartite = (0..=d).all(|i| a(i) == 0);
    let antipodal = (0..=d).all(|i| i == d / 2 || bi(i) == ci(d - i));
    let waive = bipartite || (antipodal && d.is_multiple_of(2));
    let (d_alpha, d_beta, d_gamma) = (w[e - 1].sub(&w[e]), w[e - 1].sub(&w[e + 1]), w[e].sub(&w[e + 1]));
    let mut out = Vec::new();
    for alpha in 0..a(e) {
        for beta in 0..=bi(e) {
            let gamma = bi(e) - beta;
            let rhs = BigRational::from_integer(BigInt::from(gamma as i64 - alpha as i64 - a(e) as i64));
            let below = if theta.hi < rhs {
                true
            } else if theta.lo > rhs {
                false
            } else {
                assert!(char_poly_at(b, c, &rhs).is_zero(), "ambiguous comparison at {rhs}");
                false
            };
            if !below || (!waive && alpha == gamma) {
                continue;
            }
            let sum = d_alpha
                .mul(&Iv::int(alpha as i64))
                .add(&d_beta.mul(&Iv::int(beta as i64)))
                .add(&d_gamma.mul(&Iv::int(gamma as i64)));
            if sum.contains_zero() {
                out.push((alpha, beta, gamma));
            }
        }
    }
    Some(out)
}

/// A uniformly random dihedral symmetry of `cycle(5)`.
pub fn pentagon_automorphism(rng: &mut impl Rng) -> VertexMap {
    let s = if rng.gen_bool(0.5) { 1 } else { 4 };
    let t = rng.gen_range(0..5);
    VertexMap { image: (0..5).map(|v| (s * v + t) % 5).collect() }
}

/// A random symmetry of the Petersen graph, induced by permuting the five
/// points underlying its 2-subsets.
pub fn petersen_automorphism(rng: &mut impl Rng) -> VertexMap {
    let masks: Vec<u32> = (0u32..32).filter(|m| m.count_ones() == 2).collect();
    let mut perm: Vec<u32> = (0..5).collect();
    perm.shuffle(rng);
    let image = masks
        .iter()
        .map(|&m| {
            let moved = (0..5).filter(|&i| m >> i & 1 == 1).fold(0, |acc, i| acc | 1 << perm[i as usize]);
            masks.iter().position(|&x| x == moved).unwrap()
        })
        .collect();
    VertexMap { image }
}

/// A random symmetry of `hamming(3,3)`: permute coordinates, then symbols
/// within each coordinate.
pub fn hamming33_automorphism(rng: &mut impl Rng) -> VertexMap {
    let mut coords = [0usize, 1, 2];
    coords.shuffle(rng);
    let symbols: Vec<Vec<usize>> = (0..3)
        .map(|_| {
            let mut s = vec![0, 1, 2];
            s.shuffle(rng);
            s
        })
        .collect();
    let image = (0..27)
        .map(|v| {
            let x = [v / 9, v / 3 % 3, v % 3];
            let y: Vec<usize> = (0..3).map(|i| symbols[i][x[coords[i]]]).collect();
            y[0] * 9 + y[1] * 3 + y[2]
        })
        .collect();
    VertexMap { image }
}
