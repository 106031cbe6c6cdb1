//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use hms_core::elliptic::Mat2;
use hms_core::field::{FieldContext, FieldElement, PrimeIdealData, Splitting};
use hms_core::tree::{center_of_pair, CenterResult, TreeGraph};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

/// Kronecker symbol `(a | n)` for `n > 0`.
pub fn kronecker(a: i64, n: i64) -> i64 {
    assert!(n > 0);
    let mut n = n;
    let mut a = a;
    let mut result = 1;
    while n % 2 == 0 {
        n /= 2;
        match a.rem_euclid(8) {
            1 | 7 => {}
            3 | 5 => result = -result,
            _ => return 0,
        }
    }
    // Jacobi symbol (a | n), n odd
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// `h(-N)` for a fundamental discriminant `-N < -4` by Dirichlet's formula
/// `h = -(1/N) sum_{a<N} chi(a) a`.
pub fn class_number_dirichlet(n: i64) -> i64 {
    let s: i64 = (1..n).map(|a| kronecker(-n, a) * a).sum();
    assert_eq!(s % n, 0);
    -s / n
}

/// `zeta_E(-1) = B_{2,chi} / 24` with `B_{2,chi} = D sum chi(a) B_2(a/D)`.
pub fn zeta_bernoulli(d: i64) -> BigRational {
    let mut b2 = BigRational::from_integer(0.into());
    for a in 1..=d {
        let chi = kronecker(d, a);
        if chi == 0 {
            continue;
        }
        let x = BigRational::new(a.into(), d.into());
        let b = &x * &x - &x + BigRational::new(1.into(), 6.into());
        b2 += b * BigRational::from_integer(chi.into());
    }
    b2 * BigRational::from_integer(d.into()) / BigRational::from_integer(24.into())
}

pub fn elem(d: i64, x: i64, y: i64) -> FieldElement {
    FieldElement::from_basis(d, x, y)
}

fn t_mat(d: i64, mu: FieldElement) -> Mat2 {
    Mat2::new(FieldElement::one(d), mu, FieldElement::zero(d), FieldElement::one(d))
}

/// A random word in translations and `S`.
pub fn random_sl2<R: Rng>(d: i64, rng: &mut R, len: usize) -> Mat2 {
    let s = Mat2::from_ints(d, 0, -1, 1, 0);
    let mut m = Mat2::identity(d);
    for _ in 0..len {
        let mu = elem(d, rng.gen_range(-2..=2), rng.gen_range(-1..=1));
        m = m.mul(&t_mat(d, mu)).mul(&s);
    }
    m
}

/// A random elliptic element: a conjugate of an order-2 or order-3 seed.
pub fn random_elliptic<R: Rng>(d: i64, rng: &mut R) -> Mat2 {
    let seed = if rng.gen_bool(0.5) { Mat2::from_ints(d, 0, -1, 1, 0) } else { Mat2::from_ints(d, 0, -1, 1, 1) };
    let len = rng.gen_range(0..4);
    random_sl2(d, rng, len).conjugate(&seed)
}

/// Representatives of `O / p` as elements of `O`.
pub fn residue_reps(p: &PrimeIdealData, d: i64) -> Vec<FieldElement> {
    let pp = p.p as i64;
    match p.splitting {
        Splitting::Inert => (0..pp).flat_map(|y| (0..pp).map(move |x| elem(d, x, y))).collect(),
        _ => (0..pp).map(|x| elem(d, x, 0)).collect(),
    }
}

/// Fixed cosets counted by conjugating with explicit coset representatives
/// and testing the lower-left entry for membership in `p`.
pub fn brute_fixed_cosets(_f: &FieldContext, g: &Mat2, p: &PrimeIdealData) -> u64 {
    let d = g.disc();
    let mut reps: Vec<Mat2> = residue_reps(p, d)
        .into_iter()
        .map(|a| Mat2::new(FieldElement::one(d), FieldElement::zero(d), a, FieldElement::one(d)))
        .collect();
    reps.push(Mat2::from_ints(d, 0, 1, -1, 0));
    reps.iter()
        .filter(|delta| {
            let h = delta.mul(g).mul(&delta.adjugate());
            p.generator.divides(&h.c)
        })
        .count() as u64
}

/// Uniform random labelled tree on `n` vertices from a Pruefer sequence.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Vec<(usize, usize)> {
    if n <= 1 {
        return vec![];
    }
    if n == 2 {
        return vec![(0, 1)];
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &x in &seq {
        degree[x] += 1;
    }
    let mut edges = vec![];
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    for &x in &seq {
        let leaf = *leaves.iter().next().unwrap();
        leaves.remove(&leaf);
        edges.push((leaf, x));
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.insert(x);
        }
    }
    let rest: Vec<usize> = leaves.into_iter().collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// All centres obtained from maximizing pairs, by all-pairs distances.
pub fn brute_centres(t: &TreeGraph, s: &[usize]) -> BTreeSet<CenterResult> {
    let dist: Vec<Vec<usize>> =
        (0..t.len()).map(|v| t.distances_from(v).into_iter().map(|x| x.unwrap()).collect()).collect();
    let best = s.iter().flat_map(|&a| s.iter().map(move |&b| (a, b))).map(|(a, b)| dist[a][b]).max().unwrap();
    let mut out = BTreeSet::new();
    for &a in s {
        for &b in s {
            if dist[a][b] == best {
                out.insert(center_of_pair(t, a, b));
            }
        }
    }
    out
}

/// `k` copies of a random rooted tree glued to a hub (or, for `k = 2` and
/// `edge_hub`, to the two ends of a central edge). Returns the edges, the
/// cyclic automorphism permuting the copies, and the copy-size.
pub fn symmetric_tree<R: Rng>(
    k: usize,
    m: usize,
    edge_hub: bool,
    rng: &mut R,
) -> (usize, Vec<(usize, usize)>, Vec<usize>, usize) {
    let base = random_tree(m, rng);
    let hubs = if edge_hub { 2 } else { 1 };
    let k = if edge_hub { 2 } else { k };
    let n = hubs + k * m;
    let mut edges = vec![];
    if edge_hub {
        edges.push((0, 1));
    }
    for c in 0..k {
        let off = hubs + c * m;
        let hub = if edge_hub { c } else { 0 };
        edges.push((hub, off));
        for &(a, b) in &base {
            edges.push((off + a, off + b));
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    if edge_hub {
        perm[0] = 1;
        perm[1] = 0;
    }
    for c in 0..k {
        for v in 0..m {
            perm[hubs + c * m + v] = hubs + ((c + 1) % k) * m + v;
        }
    }
    (n, edges, perm, m)
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// `h(-n)` by listing every form `(a, b, c)` with `|b| <= a <= c <= n` and
/// keeping the primitive reduced ones.
pub fn class_number_brute(n: i64) -> u64 {
    let mut count = 0;
    for a in 1..=n {
        // c >= a and |b| <= a force 3 a^2 <= n
        if 3 * a * a > n {
            break;
        }
        for b in -a..=a {
            let num = b * b + n;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || c > n {
                continue;
            }
            if (b.abs() == a || a == c) && b < 0 {
                continue;
            }
            if num_integer::gcd(num_integer::gcd(a, b), c) != 1 {
                continue;
            }
            count += 1;
        }
    }
    count
}
