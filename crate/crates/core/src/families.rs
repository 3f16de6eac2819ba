//! Constructors for standard group families and the benchmark corpus.

use crate::error::{Error, Result};
use crate::group::GroupTable;

pub fn cyclic(n: usize) -> Result<GroupTable> {
    if n == 0 {
        return Err(Error::BadParams("cyclic order must be positive".into()));
    }
    GroupTable::from_fn(n, |a, b| (a + b) % n)
}

/// `(Z_p)^k`, elements indexed by their base-`p` digit vectors.
pub fn elementary_abelian(p: usize, k: u32) -> Result<GroupTable> {
    if !is_prime(p) {
        return Err(Error::BadParams(format!("{p} is not prime")));
    }
    let n = p
        .checked_pow(k)
        .ok_or_else(|| Error::BadParams("order overflow".into()))?;
    GroupTable::from_fn(n, |a, b| {
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..k {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    })
}

/// Dihedral group of the given order `2m`; `r^i s^j` is stored at `i + m*j`.
pub fn dihedral(order: usize) -> Result<GroupTable> {
    if order < 2 || !order.is_multiple_of(2) {
        return Err(Error::BadParams(format!(
            "dihedral order {order} must be even"
        )));
    }
    let m = order / 2;
    GroupTable::from_fn(order, |a, b| {
        let (i, j) = (a % m, a / m);
        let (k, l) = (b % m, b / m);
        let rot = if j == 0 { i + k } else { i + m - k };
        rot % m + m * ((j + l) % 2)
    })
}

/// Dicyclic group of order `4m`: `a^(2m) = 1`, `b^2 = a^m`, `b a b^-1 = a^-1`.
/// Order 8 gives the quaternion group.
pub fn dicyclic(order: usize) -> Result<GroupTable> {
    if order < 8 || !order.is_multiple_of(4) {
        return Err(Error::BadParams(format!(
            "dicyclic order {order} must be a multiple of 4, at least 8"
        )));
    }
    let c = order / 2;
    let m = order / 4;
    GroupTable::from_fn(order, |x, y| {
        let (i, j) = (x % c, x / c);
        let (k, l) = (y % c, y / c);
        let mut rot = if j == 0 { i + k } else { i + c - k };
        if j == 1 && l == 1 {
            rot += m;
        }
        rot % c + c * ((j + l) % 2)
    })
}

pub fn quaternion8() -> GroupTable {
    dicyclic(8).expect("order 8 is dicyclic")
}

/// Upper unitriangular 3x3 matrices over `F_p`; `(a, b, c)` at `a + p*b + p^2*c`.
pub fn heisenberg(p: usize) -> Result<GroupTable> {
    if !is_prime(p) {
        return Err(Error::BadParams(format!("{p} is not prime")));
    }
    let split = |x: usize| (x % p, (x / p) % p, x / (p * p));
    GroupTable::from_fn(p * p * p, |x, y| {
        let (a, b, c) = split(x);
        let (a2, b2, c2) = split(y);
        (a + a2) % p + p * ((b + b2) % p) + p * p * ((c + c2 + a * b2) % p)
    })
}

/// `Z_q ⋊ Z_p` where the generator of `Z_p` acts by multiplication with the
/// smallest unit of multiplicative order exactly `p`.
pub fn semidirect(q: usize, p: usize) -> Result<GroupTable> {
    if q < 2 || p < 2 {
        return Err(Error::BadParams(
            "semidirect factors must have order at least 2".into(),
        ));
    }
    let r = (2..q)
        .find(|&r| unit_order(r, q) == Some(p))
        .ok_or_else(|| Error::BadParams(format!("Z_{q} has no automorphism of order {p}")))?;
    metacyclic(q, p, r)
}

/// `Z_q ⋊ Z_p` with the generator of `Z_p` acting as multiplication by `r`,
/// which must satisfy `r^p = 1 mod q`.
pub fn metacyclic(q: usize, p: usize, r: usize) -> Result<GroupTable> {
    if !unit_order(r, q).is_some_and(|k| p.is_multiple_of(k)) {
        return Err(Error::BadParams(format!(
            "{r} is not a unit of order dividing {p} mod {q}"
        )));
    }
    let mut powers = vec![1usize % q; p];
    for i in 1..p {
        powers[i] = powers[i - 1] * r % q;
    }
    // (a, b) stored at a + q*b, with (a, b)(c, d) = (a + r^b c, b + d).
    GroupTable::from_fn(q * p, |x, y| {
        let (a, b) = (x % q, x / q);
        let (c, d) = (y % q, y / q);
        (a + powers[b] * c) % q + q * ((b + d) % p)
    })
}

fn unit_order(r: usize, q: usize) -> Option<usize> {
    let mut x = r % q;
    let mut k = 1;
    while x != 1 % q {
        x = x * r % q;
        k += 1;
        if k > q {
            return None;
        }
    }
    Some(k)
}

/// `G x H` with `(g, h)` at `g*|H| + h`.
pub fn direct_product(g: &GroupTable, h: &GroupTable) -> GroupTable {
    let m = h.order();
    GroupTable::from_fn(g.order() * m, |x, y| {
        g.mul(x / m, y / m) * m + h.mul(x % m, y % m)
    })
    .expect("direct product of groups is a group")
}

pub fn symmetric(k: usize) -> Result<GroupTable> {
    permutation_group(permutations(k))
}

pub fn alternating(k: usize) -> Result<GroupTable> {
    permutation_group(permutations(k).into_iter().filter(|p| is_even(p)).collect())
}

/// `SL(2, p)`: 2x2 matrices over `F_p` of determinant 1.
pub fn special_linear2(p: usize) -> Result<GroupTable> {
    if !is_prime(p) {
        return Err(Error::BadParams(format!("{p} is not prime")));
    }
    let mut mats = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    if (a * d + p * p - b * c % p) % p == 1 {
                        mats.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    let index = |m: [usize; 4]| mats.binary_search(&m).unwrap();
    GroupTable::from_fn(mats.len(), |x, y| {
        let [a, b, c, d] = mats[x];
        let [e, f, g, h] = mats[y];
        index([
            (a * e + b * g) % p,
            (a * f + b * h) % p,
            (c * e + d * g) % p,
            (c * f + d * h) % p,
        ])
    })
}

/// Builds a family member from its command-line name and integer parameters.
pub fn make_family(family: &str, params: &[usize]) -> Result<GroupTable> {
    let want = |k: usize| {
        if params.len() == k {
            Ok(())
        } else {
            Err(Error::BadParams(format!(
                "{family} takes {k} parameter(s), got {}",
                params.len()
            )))
        }
    };
    match family {
        "cyclic" => want(1).and_then(|_| cyclic(params[0])),
        "elemabelian" => want(2).and_then(|_| {
            let k = u32::try_from(params[1])
                .map_err(|_| Error::BadParams("exponent too large".into()))?;
            elementary_abelian(params[0], k)
        }),
        "dihedral" => want(1).and_then(|_| dihedral(params[0])),
        "dicyclic" => want(1).and_then(|_| dicyclic(params[0])),
        "quaternion8" => want(0).map(|_| quaternion8()),
        "heisenberg" => want(1).and_then(|_| heisenberg(params[0])),
        "semidirect" => want(2).and_then(|_| semidirect(params[0], params[1])),
        "symmetric" => want(1).and_then(|_| symmetric(params[0])),
        "alternating" => want(1).and_then(|_| alternating(params[0])),
        "sl2" => want(1).and_then(|_| special_linear2(params[0])),
        _ => Err(Error::BadParams(format!("unknown family {family:?}"))),
    }
}

/// Named solvable groups of order at most 64 used by the benchmark and the
/// cross-validation suites, in increasing order.
pub fn corpus(max_order: usize) -> Vec<(String, GroupTable)> {
    let z = |n| cyclic(n).unwrap();
    let e = |p, k| elementary_abelian(p, k).unwrap();
    let d = |n| dihedral(n).unwrap();
    let s3 = symmetric(3).unwrap();
    let a4 = alternating(4).unwrap();
    let x = direct_product;

    let all = vec![
        ("Z4", z(4)),
        ("Z2^2", e(2, 2)),
        ("Z6", z(6)),
        ("S3", s3.clone()),
        ("Z8", z(8)),
        ("Z4xZ2", x(&z(4), &z(2))),
        ("Z2^3", e(2, 3)),
        ("D8", d(8)),
        ("Q8", quaternion8()),
        ("Z3^2", e(3, 2)),
        ("A4", a4.clone()),
        ("Z4xZ4", x(&z(4), &z(4))),
        ("Z4:Z4", metacyclic(4, 4, 3).unwrap()),
        ("Q8xZ2", x(&quaternion8(), &z(2))),
        ("D18", d(18)),
        ("S3xZ3", x(&s3, &z(3))),
        ("Z18", z(18)),
        ("F20", semidirect(5, 4).unwrap()),
        ("D20", d(20)),
        ("Z7:Z3", semidirect(7, 3).unwrap()),
        ("Z21", z(21)),
        ("S4", symmetric(4).unwrap()),
        ("A4xZ2", x(&a4, &z(2))),
        ("SL2(3)", special_linear2(3).unwrap()),
        ("Z25", z(25)),
        ("Z5^2", e(5, 2)),
        ("Z27", z(27)),
        ("Z3^3", e(3, 3)),
        ("Z9xZ3", x(&z(9), &z(3))),
        ("Heis(3)", heisenberg(3).unwrap()),
        ("Z9:Z3", semidirect(9, 3).unwrap()),
        ("Z32", z(32)),
        ("D32", d(32)),
        ("Q32", dicyclic(32).unwrap()),
        ("S3xS3", x(&s3, &s3)),
        ("Z13:Z3", semidirect(13, 3).unwrap()),
        ("Z11:Z5", semidirect(11, 5).unwrap()),
        ("Z64", z(64)),
        ("D64", d(64)),
    ];
    all.into_iter()
        .filter(|(_, g)| g.order() <= max_order)
        .map(|(name, g)| (name.to_string(), g))
        .collect()
}

fn is_prime(p: usize) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

fn is_even(p: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

/// All permutations of `0..k` in lexicographic order.
fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Permutations are composed right to left: `(a*b)(i) = a(b(i))`.
fn permutation_group(perms: Vec<Vec<usize>>) -> Result<GroupTable> {
    if perms.is_empty() {
        return Err(Error::BadParams("empty permutation group".into()));
    }
    GroupTable::from_fn(perms.len(), |a, b| {
        let c: Vec<usize> = perms[b].iter().map(|&i| perms[a][i]).collect();
        perms.binary_search(&c).unwrap()
    })
}
