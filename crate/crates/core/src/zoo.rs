//! Constructors for the families of p-groups used throughout the crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{direct_product, is_prime, log_p, Elem, FiniteGroup, Subgroup, DEFAULT_ORDER_CAP};

fn check_cap(order: u64) -> Result<()> {
    if order > DEFAULT_ORDER_CAP as u64 {
        Err(Error::OrderCapExceeded { cap: DEFAULT_ORDER_CAP })
    } else {
        Ok(())
    }
}

fn power_of_two(n: u64, min: u64, what: &str) -> Result<()> {
    if n < min || log_p(n, 2).is_none() {
        return Err(Error::InvalidInput(format!(
            "{what} order must be a power of 2 that is at least {min}, got {n}"
        )));
    }
    check_cap(n)
}

/// Direct sum of cyclic groups of the given prime-power orders.
pub fn abelian(orders: &[u64]) -> Result<FiniteGroup> {
    let mut prime = None;
    for &q in orders {
        let p = (2..=q).find(|d| q % d == 0).unwrap_or(1);
        if q < 2 || !is_prime(p) || log_p(q, p as u32).is_none() {
            return Err(Error::InvalidInput(format!("{q} is not a prime power")));
        }
        match prime {
            None => prime = Some(p as u32),
            Some(r) if r != p as u32 => return Err(Error::MixedPrimes(r, p as u32)),
            _ => {}
        }
    }
    check_cap(orders.iter().product())?;
    let gens: Vec<Vec<u64>> = (0..orders.len())
        .map(|i| (0..orders.len()).map(|j| u64::from(i == j)).collect())
        .collect();
    let (g, elems) = FiniteGroup::from_closure(
        vec![0u64; orders.len()],
        &gens,
        |a, b| a.iter().zip(b).zip(orders).map(|((x, y), m)| (x + y) % m).collect(),
        DEFAULT_ORDER_CAP,
        prime.or(Some(2)),
    )?;
    let labels = elems.iter().map(|v| format!("{v:?}")).collect();
    Ok(g.with_labels(labels))
}

pub fn cyclic(n: u64) -> Result<FiniteGroup> {
    if n == 1 {
        return abelian(&[]);
    }
    abelian(&[n])
}

/// `<a, b | a^m, b^q = a^s, b a b^-1 = a^t>` with elements `a^i b^j`.
fn metacyclic(m: u64, q: u64, s: u64, t: u64, name: &str) -> Result<FiniteGroup> {
    check_cap(m * q)?;
    let tpow: Vec<u64> = (0..q)
        .scan(1u64, |acc, _| {
            let v = *acc;
            *acc = *acc * t % m;
            Some(v)
        })
        .collect();
    let mul = |x: &(u64, u64), y: &(u64, u64)| {
        let (i, j) = *x;
        let (k, l) = *y;
        let mut a = (i + tpow[j as usize] * k) % m;
        let mut b = j + l;
        if b >= q {
            b -= q;
            a = (a + s) % m;
        }
        (a, b)
    };
    let (g, elems) = FiniteGroup::from_closure((0, 0), &[(1, 0), (0, 1)], mul, DEFAULT_ORDER_CAP, None)?;
    if g.order() as u64 != m * q {
        return Err(Error::InvalidInput(format!("{name}: presentation collapsed")));
    }
    let labels = elems
        .iter()
        .map(|&(i, j)| match (i, j) {
            (0, 0) => "1".to_string(),
            (i, 0) => format!("a^{i}"),
            (0, j) => format!("b^{j}"),
            (i, j) => format!("a^{i}b^{j}"),
        })
        .collect();
    Ok(g.with_labels(labels))
}

pub fn dihedral(n: u64) -> Result<FiniteGroup> {
    power_of_two(n, 8, "dihedral")?;
    let m = n / 2;
    metacyclic(m, 2, 0, m - 1, "dihedral")
}

pub fn quaternion(n: u64) -> Result<FiniteGroup> {
    power_of_two(n, 8, "quaternion")?;
    let m = n / 2;
    metacyclic(m, 2, m / 2, m - 1, "quaternion")
}

pub fn semidihedral(n: u64) -> Result<FiniteGroup> {
    power_of_two(n, 16, "semidihedral")?;
    let m = n / 2;
    metacyclic(m, 2, 0, m / 2 - 1, "semidihedral")
}

/// The modular group `<a, b | a^(n/2), b^2, b a b^-1 = a^(n/4 + 1)>`.
pub fn modular(n: u64) -> Result<FiniteGroup> {
    power_of_two(n, 16, "modular")?;
    let m = n / 2;
    metacyclic(m, 2, 0, m / 2 + 1, "modular")
}

/// Upper unitriangular 3x3 matrices over F_p, as triples `(a, b, c)` with
/// `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')`. For p = 2 this is D8.
pub fn heisenberg(p: u32) -> Result<FiniteGroup> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    check_cap((p as u64).pow(3))?;
    let p = p as u64;
    let mul =
        |x: &(u64, u64, u64), y: &(u64, u64, u64)| ((x.0 + y.0) % p, (x.1 + y.1) % p, (x.2 + y.2 + x.0 * y.1) % p);
    let (g, elems) = FiniteGroup::from_closure((0, 0, 0), &[(1, 0, 0), (0, 1, 0)], mul, DEFAULT_ORDER_CAP, None)?;
    let labels = elems.iter().map(|t| format!("{t:?}")).collect();
    Ok(g.with_labels(labels))
}

/// Which extraspecial group of a given order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtraspecialType {
    /// p = 2: central product of D8 copies.
    Plus,
    /// p = 2: Q8 centrally multiplied with D8 copies.
    Minus,
    /// odd p, exponent p.
    ExponentP,
    /// odd p, exponent p^2.
    ExponentP2,
}

/// Central product of groups whose centers are cyclic of order p:
/// `(G_1 x ... x G_n)` modulo the tuples of central elements with product 1.
pub fn central_product(factors: &[FiniteGroup]) -> Result<FiniteGroup> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::InvalidInput("central product of no groups".into()))?;
    let mut acc = first.clone();
    for next in rest {
        let za = cyclic_center_generator(&acc)?;
        let zb = cyclic_center_generator(next)?;
        let prod = direct_product(&acc, next)?;
        let pair = (za as usize * next.order() + next.inv(zb) as usize) as Elem;
        let h = prod.generate(&[pair]);
        acc = prod.quotient(&h)?.0;
    }
    Ok(acc)
}

fn cyclic_center_generator(g: &FiniteGroup) -> Result<Elem> {
    let z = g.center();
    let gen = z
        .iter()
        .find(|&x| g.element_order(x) as usize == z.order())
        .ok_or_else(|| Error::InvalidInput("center is not cyclic".into()))?;
    Ok(gen)
}

/// Extraspecial group of order `p^(2m+1)`.
pub fn extraspecial(p: u32, m: u32, kind: ExtraspecialType) -> Result<FiniteGroup> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if m == 0 {
        return Err(Error::InvalidInput("extraspecial groups need m >= 1".into()));
    }
    check_cap((p as u64).pow(2 * m + 1))?;
    let (first, rest) = match (p, kind) {
        (2, ExtraspecialType::Plus) => (dihedral(8)?, dihedral(8)?),
        (2, ExtraspecialType::Minus) => (quaternion(8)?, dihedral(8)?),
        (2, _) => {
            return Err(Error::InvalidInput("for p = 2 the extraspecial type is + or -".into()));
        }
        (_, ExtraspecialType::ExponentP) => (heisenberg(p)?, heisenberg(p)?),
        (_, ExtraspecialType::ExponentP2) => {
            let q = p as u64;
            (metacyclic(q * q, q, 0, 1 + q, "extraspecial")?, heisenberg(p)?)
        }
        (_, _) => {
            return Err(Error::InvalidInput("for odd p the extraspecial type is p or p2".into()));
        }
    };
    let mut factors = vec![first];
    factors.extend(std::iter::repeat_n(rest, m as usize - 1));
    let g = central_product(&factors)?;
    check_extraspecial(&g)?;
    Ok(g)
}

/// Center cyclic of order p and elementary abelian central quotient.
pub fn is_extraspecial(g: &FiniteGroup) -> bool {
    check_extraspecial(g).is_ok()
}

fn check_extraspecial(g: &FiniteGroup) -> Result<()> {
    let z = g.center();
    if z.order() != g.prime() as usize {
        return Err(Error::InvalidInput(format!(
            "center has order {}, expected {}",
            z.order(),
            g.prime()
        )));
    }
    let (q, _) = g.quotient(&z)?;
    if !q.is_abelian() || q.exponent() > g.prime() as u64 {
        return Err(Error::InvalidInput("central quotient is not elementary abelian".into()));
    }
    Ok(())
}

/// `G^n` modulo `{(z^e_1, ..., z^e_n) : e_1 + ... + e_n = 0}` where `z`
/// generates the (cyclic) center of `G`.
pub fn center_diagonal_quotient(g: &FiniteGroup, n: u32) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one factor".into()));
    }
    check_cap((g.order() as u64).pow(n))?;
    let z = cyclic_center_generator(g)?;
    let mut power = g.clone();
    for _ in 1..n {
        power = direct_product(&power, g)?;
    }
    let base = g.order();
    // index of the tuple with `x` in slot i (slot 0 most significant)
    let at = |i: u32, x: Elem| -> Elem { (x as usize * base.pow(n - 1 - i)) as Elem };
    let gens: Vec<Elem> = (0..n - 1).map(|i| power.mul(at(i, z), at(i + 1, g.inv(z)))).collect();
    let h = power.generate(&gens);
    Ok(power.quotient(&h)?.0)
}

/// `Gamma^n / H_n` for a nonabelian `Gamma` of order p^3; the result is
/// extraspecial of order `p^(2n+1)`.
pub fn gamma_power_quotient(gamma: &FiniteGroup, n: u32) -> Result<FiniteGroup> {
    let p = gamma.prime() as usize;
    if gamma.order() != p * p * p || gamma.is_abelian() {
        return Err(Error::InvalidInput("base group must be nonabelian of order p^3".into()));
    }
    let q = center_diagonal_quotient(gamma, n)?;
    check_extraspecial(&q)?;
    Ok(q)
}

/// `sum_j floor(n / 2^j)`: the exponent of 2 in `n!`.
pub fn two_adic_factorial(n: u64) -> u32 {
    let mut s = 0;
    let mut q = n / 2;
    while q > 0 {
        s += q;
        q /= 2;
    }
    s as u32
}

fn wreath_block_generators(offset: usize, size: usize, degree: usize, out: &mut Vec<Vec<usize>>) {
    if size < 2 {
        return;
    }
    let half = size / 2;
    wreath_block_generators(offset, half, degree, out);
    let mut swap: Vec<usize> = (0..degree).collect();
    for i in offset..offset + half {
        swap[i] = i + half;
        swap[i + half] = i;
    }
    out.push(swap);
}

/// Generators of the standard Sylow 2-subgroup of S_n: one iterated wreath
/// product of Z/2 per binary digit of `n`.
pub fn sylow2_generators(n: usize) -> Vec<Vec<usize>> {
    let mut gens = Vec::new();
    let mut offset = 0;
    for bit in (0..usize::BITS).rev() {
        let size = 1usize << bit;
        if n & size != 0 {
            wreath_block_generators(offset, size, n, &mut gens);
            offset += size;
        }
    }
    gens
}

/// A Sylow 2-subgroup of the symmetric group on `n` points.
pub fn sylow2_sym(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > 8 {
        return Err(Error::ParameterOutOfRange {
            offset: 0,
            message: format!("P2 degree {n} not in 1..=8"),
        });
    }
    FiniteGroup::from_permutations(n, &sylow2_generators(n), Some(2))
}

/// The group `F_n`: signed permutation matrices with permutation part in
/// the Sylow 2-subgroup `P_n` and determinant +1.
#[derive(Clone, Debug)]
pub struct SignedPermutations {
    pub n: usize,
    pub group: FiniteGroup,
    /// `images[g][i] = ±(j+1)` when `g` sends `e_i` to `±e_j`.
    pub images: Vec<Vec<i16>>,
}

impl SignedPermutations {
    /// Diagonal elements (trivial permutation part) of `F_n`.
    pub fn diagonal_subgroup(&self) -> Subgroup {
        let diag: Vec<Elem> = (0..self.group.order() as Elem)
            .filter(|&g| {
                self.images[g as usize]
                    .iter()
                    .enumerate()
                    .all(|(i, &v)| v.unsigned_abs() as usize == i + 1)
            })
            .collect();
        self.group.generate(&diag)
    }

    pub fn determinant(&self, g: Elem) -> i32 {
        signed_det(&self.images[g as usize])
    }
}

fn signed_det(img: &[i16]) -> i32 {
    let negs = img.iter().filter(|&&v| v < 0).count();
    let perm: Vec<usize> = img.iter().map(|v| v.unsigned_abs() as usize - 1).collect();
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0;
    for s in 0..perm.len() {
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    if (negs + transpositions) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `F_n`, the kernel of `det` on `mu_2^n ⋊ P_n`.
pub fn signed_perm_f(n: usize) -> Result<SignedPermutations> {
    if n == 0 || n > 8 {
        return Err(Error::ParameterOutOfRange {
            offset: 0,
            message: format!("F degree {n} not in 1..=8"),
        });
    }
    // act on 2n points: 2i = +e_i, 2i+1 = -e_i
    let degree = 2 * n;
    let mut gens: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let mut flip: Vec<usize> = (0..degree).collect();
        flip.swap(2 * i, 2 * i + 1);
        gens.push(flip);
    }
    for tau in sylow2_generators(n) {
        gens.push((0..degree).map(|x| 2 * tau[x / 2] + x % 2).collect());
    }
    let perms: Vec<Vec<u16>> = gens.iter().map(|g| g.iter().map(|&x| x as u16).collect()).collect();
    let (whole, elems) = FiniteGroup::from_closure(
        (0..degree as u16).collect::<Vec<u16>>(),
        &perms,
        |a, b| a.iter().map(|&x| b[x as usize]).collect(),
        DEFAULT_ORDER_CAP,
        Some(2),
    )?;
    let all: Vec<Vec<i16>> = elems
        .iter()
        .map(|perm| {
            (0..n)
                .map(|i| {
                    let y = perm[2 * i] as i16;
                    if y % 2 == 0 {
                        y / 2 + 1
                    } else {
                        -(y / 2 + 1)
                    }
                })
                .collect()
        })
        .collect();
    let kernel: Vec<Elem> = (0..whole.order() as Elem)
        .filter(|&g| signed_det(&all[g as usize]) == 1)
        .collect();
    let sub = whole.generate(&kernel);
    debug_assert_eq!(sub.order(), kernel.len());
    let (group, embed) = whole.promote(&sub);
    let images: Vec<Vec<i16>> = embed.iter().map(|&e| all[e as usize].clone()).collect();
    let labels = images
        .iter()
        .map(|img| format!("[{}]", img.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    Ok(SignedPermutations {
        n,
        group: group.with_labels(labels),
        images,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelian_groups() {
        let g = abelian(&[2, 2, 2]).unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.exponent(), 2);
        assert_eq!(abelian(&[4]).unwrap().exponent(), 4);
        let g = abelian(&[9, 3]).unwrap();
        assert_eq!((g.order(), g.prime()), (27, 3));
        assert!(matches!(abelian(&[2, 3]), Err(Error::MixedPrimes(2, 3))));
        assert!(abelian(&[6]).is_err());
    }

    #[test]
    fn two_groups_of_maximal_class() {
        for n in [8u64, 16, 32] {
            let d = dihedral(n).unwrap();
            d.validate().unwrap();
            assert_eq!(d.order() as u64, n);
            assert_eq!(d.center().order(), 2);
            let q = quaternion(n).unwrap();
            q.validate().unwrap();
            let involutions = (1..q.order() as Elem).filter(|&x| q.element_order(x) == 2).count();
            assert_eq!(involutions, 1);
        }
        semidihedral(16).unwrap().validate().unwrap();
        assert!(semidihedral(8).is_err());
    }

    #[test]
    fn modular_16_center_brute_force() {
        let g = modular(16).unwrap();
        g.validate().unwrap();
        let brute = (0..16).filter(|&z| (0..16).all(|x| g.mul(z, x) == g.mul(x, z))).count();
        assert_eq!(brute, 4);
        assert_eq!(g.center().order(), 4);
    }

    #[test]
    fn extraspecial_groups() {
        let h = extraspecial(3, 1, ExtraspecialType::ExponentP).unwrap();
        assert_eq!((h.order(), h.exponent()), (27, 3));
        assert_eq!(h.center().order(), 3);
        let h2 = extraspecial(3, 1, ExtraspecialType::ExponentP2).unwrap();
        assert_eq!((h2.order(), h2.exponent()), (27, 9));
        let plus = extraspecial(2, 2, ExtraspecialType::Plus).unwrap();
        assert_eq!(plus.order(), 32);
        assert!(is_extraspecial(&plus));
        let q8 = extraspecial(2, 1, ExtraspecialType::Minus).unwrap();
        assert_eq!(q8.order(), 8);
        assert_eq!((1..8).filter(|&x| q8.element_order(x) == 2).count(), 1);
        // the + and - groups of order 32 differ in their number of involutions
        let minus = extraspecial(2, 2, ExtraspecialType::Minus).unwrap();
        let inv = |g: &FiniteGroup| (1..g.order() as Elem).filter(|&x| g.element_order(x) == 2).count();
        assert_ne!(inv(&plus), inv(&minus));
        assert!(extraspecial(2, 1, ExtraspecialType::ExponentP).is_err());
        assert!(extraspecial(3, 4, ExtraspecialType::ExponentP).is_err());
    }

    #[test]
    fn gamma_quotients() {
        let d8 = dihedral(8).unwrap();
        let g = gamma_power_quotient(&d8, 2).unwrap();
        assert_eq!(g.order(), 32);
        let g = gamma_power_quotient(&quaternion(8).unwrap(), 2).unwrap();
        assert_eq!(g.order(), 32);
        let g = gamma_power_quotient(&heisenberg(3).unwrap(), 2).unwrap();
        assert_eq!(g.order(), 243);
        assert!(is_extraspecial(&g));
        assert!(gamma_power_quotient(&abelian(&[2, 2, 2]).unwrap(), 2).is_err());
    }

    #[test]
    fn sylow_subgroups_of_symmetric_groups() {
        for n in 1..=8usize {
            let g = sylow2_sym(n).unwrap();
            assert_eq!(g.order(), 1 << two_adic_factorial(n as u64), "n = {n}");
        }
        assert_eq!(sylow2_sym(4).unwrap().order(), 8);
        assert_eq!(sylow2_sym(6).unwrap().order(), 16);
        assert_eq!(sylow2_sym(2).unwrap().order(), 2);
    }

    #[test]
    fn signed_permutation_groups() {
        let f2 = signed_perm_f(2).unwrap();
        assert_eq!((f2.group.order(), f2.group.exponent()), (4, 4));
        let f4 = signed_perm_f(4).unwrap();
        assert_eq!(f4.group.order(), 64);
        assert!((0..64).all(|g| f4.determinant(g) == 1));
        let d = f4.diagonal_subgroup();
        assert_eq!(d.order(), 8);
        assert!(d.iter().all(|x| f4.group.element_order(x) <= 2));
        let f6 = signed_perm_f(6).unwrap();
        assert_eq!(f6.group.order(), 512);
        assert_eq!(f6.diagonal_subgroup().order(), 32);
        assert!(signed_perm_f(8).is_err());
        let f1 = signed_perm_f(1).unwrap();
        assert_eq!(f1.group.order(), 1);
    }

    #[test]
    fn block_sums_embed() {
        for (m, n) in [(2, 2), (4, 2)] {
            let (a, b, c) = (
                signed_perm_f(m).unwrap(),
                signed_perm_f(n).unwrap(),
                signed_perm_f(m + n).unwrap(),
            );
            let big: std::collections::HashSet<&Vec<i16>> = c.images.iter().collect();
            for x in &a.images {
                for y in &b.images {
                    let shift = m as i16;
                    let sum: Vec<i16> = x
                        .iter()
                        .copied()
                        .chain(y.iter().map(|&v| v + v.signum() * shift))
                        .collect();
                    assert!(big.contains(&sum), "{sum:?} not in F_{}", m + n);
                }
            }
        }
    }
}
