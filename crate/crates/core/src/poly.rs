//! Univariate polynomials over `F_p`, characteristic polynomials, and
//! complete factorization (square-free, distinct-degree, equal-degree).

use rand::Rng;

use crate::field::FieldSpec;
use crate::matrix::Matrix;

/// Coefficients from low to high degree, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    pub fn x() -> Self {
        Poly { coeffs: vec![0, 1] }
    }

    pub fn constant(c: u64) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Poly, f: FieldSpec) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                f.add(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        Poly::from_coeffs(c)
    }

    pub fn sub(&self, other: &Poly, f: FieldSpec) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                f.sub(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        Poly::from_coeffs(c)
    }

    pub fn scale(&self, c: u64, f: FieldSpec) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, f: FieldSpec) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::from_coeffs(c)
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn divrem(&self, divisor: &Poly, f: FieldSpec) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let dd = divisor.deg();
        if self.is_zero() || self.deg() < dd {
            return (Poly::zero(), self.clone());
        }
        let inv_lead = f.inv(divisor.lead());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0; self.deg() - dd + 1];
        for k in (0..quot.len()).rev() {
            let c = f.mul(rem[k + dd], inv_lead);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = f.sub(rem[k + j], f.mul(c, b));
            }
        }
        rem.truncate(dd);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    pub fn rem(&self, divisor: &Poly, f: FieldSpec) -> Poly {
        self.divrem(divisor, f).1
    }

    /// Exact quotient; debug-asserts a zero remainder.
    pub fn div_exact(&self, divisor: &Poly, f: FieldSpec) -> Poly {
        let (q, r) = self.divrem(divisor, f);
        debug_assert!(r.is_zero());
        q
    }

    pub fn monic(&self, f: FieldSpec) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(f.inv(self.lead()), f)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly, f: FieldSpec) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn derivative(&self, f: FieldSpec) -> Poly {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul(a, (i as u64) % f.p()))
            .collect();
        Poly::from_coeffs(c)
    }

    pub fn mul_mod(&self, other: &Poly, modulus: &Poly, f: FieldSpec) -> Poly {
        self.mul(other, f).rem(modulus, f)
    }

    pub fn pow_mod(&self, mut exp: u64, modulus: &Poly, f: FieldSpec) -> Poly {
        let mut base = self.rem(modulus, f);
        let mut acc = Poly::one().rem(modulus, f);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_mod(&base, modulus, f);
            }
            base = base.mul_mod(&base, modulus, f);
            exp >>= 1;
        }
        acc
    }

    pub fn eval(&self, x: u64, f: FieldSpec) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `self(a)` for a square matrix `a`, by Horner's rule.
    pub fn eval_matrix(&self, a: &Matrix, f: FieldSpec) -> Matrix {
        let n = a.rows();
        let mut acc = Matrix::zeros(n, n);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(a, f);
            if c != 0 {
                for i in 0..n {
                    let v = f.add(acc.get(i, i), c);
                    acc.set(i, i, v);
                }
            }
        }
        acc
    }

    pub fn pow(&self, e: usize, f: FieldSpec) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(self, f))
    }
}

/// Characteristic polynomial `det(xI - a)` via reduction to upper
/// Hessenberg form.
pub fn charpoly(a: &Matrix, f: FieldSpec) -> Poly {
    assert!(a.is_square());
    let n = a.rows();
    let mut h = a.clone();
    for m in 1..n.saturating_sub(1) {
        let Some(piv) = (m..n).find(|&i| h.get(i, m - 1) != 0) else {
            continue;
        };
        if piv != m {
            for j in 0..n {
                let (x, y) = (h.get(piv, j), h.get(m, j));
                h.set(piv, j, y);
                h.set(m, j, x);
            }
            for i in 0..n {
                let (x, y) = (h.get(i, piv), h.get(i, m));
                h.set(i, piv, y);
                h.set(i, m, x);
            }
        }
        let inv = f.inv(h.get(m, m - 1));
        for i in m + 1..n {
            let u = f.mul(h.get(i, m - 1), inv);
            if u == 0 {
                continue;
            }
            for j in 0..n {
                let v = f.sub(h.get(i, j), f.mul(u, h.get(m, j)));
                h.set(i, j, v);
            }
            for r in 0..n {
                let v = f.add(h.get(r, m), f.mul(u, h.get(r, i)));
                h.set(r, m, v);
            }
        }
    }

    let mut ps = vec![Poly::one()];
    for m in 1..=n {
        let lin = Poly::from_coeffs(vec![f.neg(h.get(m - 1, m - 1)), 1]);
        let mut pm = lin.mul(&ps[m - 1], f);
        let mut t = 1;
        for i in (1..m).rev() {
            t = f.mul(t, h.get(i, i - 1));
            let c = f.mul(t, h.get(i - 1, m - 1));
            if c != 0 {
                pm = pm.sub(&ps[i - 1].scale(c, f), f);
            }
        }
        ps.push(pm);
    }
    ps.pop().unwrap()
}

fn pth_root(g: &Poly, f: FieldSpec) -> Poly {
    let p = f.p() as usize;
    Poly::from_coeffs(g.coeffs.iter().step_by(p).copied().collect())
}

/// Square-free decomposition of a monic polynomial: pairs `(s, e)` with the
/// `s` square-free, pairwise coprime, and `f = Π s^e`.
pub fn squarefree(g: &Poly, f: FieldSpec) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if g.deg() == 0 {
        return out;
    }
    let mut c = g.gcd(&g.derivative(f), f);
    let mut w = g.div_exact(&c, f);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c, f);
        let fac = w.div_exact(&y, f);
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w, f);
        i += 1;
    }
    if !c.is_one() {
        let root = pth_root(&c, f);
        for (s, e) in squarefree(&root, f) {
            out.push((s, e * f.p() as usize));
        }
    }
    out
}

/// Distinct-degree factorization of a monic square-free polynomial: pairs
/// `(g, d)` where `g` is the product of all irreducible factors of degree `d`.
pub fn distinct_degree(g: &Poly, f: FieldSpec) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut rest = g.clone();
    let mut h = Poly::x().rem(&rest, f);
    let mut d = 1;
    while rest.deg() >= 2 * d {
        h = h.pow_mod(f.p(), &rest, f);
        let fac = rest.gcd(&h.sub(&Poly::x(), f), f);
        if !fac.is_one() {
            rest = rest.div_exact(&fac, f);
            h = h.rem(&rest, f);
            out.push((fac, d));
        }
        d += 1;
    }
    if rest.deg() > 0 {
        let deg = rest.deg();
        out.push((rest, deg));
    }
    out
}

/// Splits a product of distinct irreducibles of common degree `d`.
pub fn equal_degree<R: Rng>(g: &Poly, d: usize, f: FieldSpec, rng: &mut R) -> Vec<Poly> {
    let n = g.deg();
    if n == d {
        return vec![g.clone()];
    }
    loop {
        let a = Poly::from_coeffs((0..n).map(|_| rng.gen_range(0..f.p())).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let probe = if f.p() == 2 {
            let mut term = a.clone();
            let mut trace = a.clone();
            for _ in 1..d {
                term = term.mul_mod(&term, g, f);
                trace = trace.add(&term, f);
            }
            trace
        } else {
            let mut frob = a.clone();
            let mut norm = a.clone();
            for _ in 1..d {
                frob = frob.pow_mod(f.p(), g, f);
                norm = norm.mul_mod(&frob, g, f);
            }
            norm.pow_mod((f.p() - 1) / 2, g, f).sub(&Poly::one(), f)
        };
        let h = g.gcd(&probe, f);
        let hd = h.deg();
        if hd > 0 && hd < n {
            let other = g.div_exact(&h, f);
            let mut parts = equal_degree(&h, d, f, rng);
            parts.extend(equal_degree(&other, d, f, rng));
            return parts;
        }
    }
}

/// Complete factorization into monic irreducibles with multiplicities,
/// sorted by (degree, coefficients).
pub fn factor<R: Rng>(g: &Poly, f: FieldSpec, rng: &mut R) -> Vec<(Poly, usize)> {
    let g = g.monic(f);
    let mut out = Vec::new();
    for (s, e) in squarefree(&g, f) {
        for (prod, d) in distinct_degree(&s, f) {
            for irr in equal_degree(&prod, d, f, rng) {
                out.push((irr.monic(f), e));
            }
        }
    }
    out.sort_by(|a, b| (a.0.deg(), &a.0.coeffs).cmp(&(b.0.deg(), &b.0.coeffs)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Determinant by elimination, used as an independent route to `det(tI - A)`.
    fn det(mut a: Matrix, f: FieldSpec) -> u64 {
        let n = a.rows();
        let mut d = 1;
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| a.get(r, c) != 0) else {
                return 0;
            };
            if p != c {
                for j in 0..n {
                    let (x, y) = (a.get(p, j), a.get(c, j));
                    a.set(p, j, y);
                    a.set(c, j, x);
                }
                d = f.neg(d);
            }
            let piv = a.get(c, c);
            d = f.mul(d, piv);
            let inv = f.inv(piv);
            for r in c + 1..n {
                let u = f.mul(a.get(r, c), inv);
                for j in c..n {
                    let v = f.sub(a.get(r, j), f.mul(u, a.get(c, j)));
                    a.set(r, j, v);
                }
            }
        }
        d
    }

    #[test]
    fn charpoly_matches_determinant_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in [2u64, 3, 101, 65_537] {
            let f = FieldSpec::new(p).unwrap();
            for n in 0..7 {
                for _ in 0..5 {
                    let mut a = Matrix::zeros(n, n);
                    for i in 0..n {
                        for j in 0..n {
                            // sparse-ish entries exercise the pivot search
                            if rng.gen_bool(0.6) {
                                a.set(i, j, rng.gen_range(0..p));
                            }
                        }
                    }
                    let chi = charpoly(&a, f);
                    assert_eq!(chi.degree(), Some(n));
                    assert_eq!(chi.lead(), 1);
                    for t in 0..p.min(6) {
                        let mut m = a.scale(f.neg(1), f);
                        for i in 0..n {
                            let v = f.add(m.get(i, i), t);
                            m.set(i, i, v);
                        }
                        assert_eq!(chi.eval(t, f), det(m, f), "p={p} n={n} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn cayley_hamilton() {
        let f = FieldSpec::new(13).unwrap();
        let a = Matrix::from_rows(3, 3, vec![vec![1, 2, 3], vec![0, 4, 5], vec![7, 0, 6]]);
        assert!(charpoly(&a, f).eval_matrix(&a, f).is_zero());
    }

    fn check_factorization(g: &Poly, f: FieldSpec) {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let fac = factor(g, f, &mut rng);
        let prod = fac
            .iter()
            .fold(Poly::one(), |acc, (h, e)| acc.mul(&h.pow(*e, f), f));
        assert_eq!(prod, g.monic(f));
        for (h, _) in &fac {
            // irreducible: no roots, and for small degree the DDF sees one block
            let ddf = distinct_degree(h, f);
            assert_eq!(ddf.len(), 1);
            assert_eq!(ddf[0].1, h.degree().unwrap());
        }
    }

    #[test]
    fn factors_over_small_and_large_primes() {
        for p in [2u64, 3, 5, 7, 65_537, crate::field::DEFAULT_PRIME] {
            let f = FieldSpec::new(p).unwrap();
            // (x^2 + 1)^2 (x + 1)^3 x (x^3 + x + 1)
            let a = Poly::from_coeffs(vec![1, 0, 1]).pow(2, f);
            let b = Poly::from_coeffs(vec![1, 1]).pow(3, f);
            let c = Poly::from_coeffs(vec![1, 1, 0, 1]);
            let g = a.mul(&b, f).mul(&Poly::x(), f).mul(&c, f);
            check_factorization(&g, f);
        }
    }

    #[test]
    fn pth_powers_in_characteristic_p() {
        let f = FieldSpec::new(3).unwrap();
        // (x + 2)^9 (x^2 + 1)^3
        let g = Poly::from_coeffs(vec![2, 1])
            .pow(9, f)
            .mul(&Poly::from_coeffs(vec![1, 0, 1]).pow(3, f), f);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fac = factor(&g, f, &mut rng);
        assert_eq!(
            fac,
            vec![
                (Poly::from_coeffs(vec![2, 1]), 9),
                (Poly::from_coeffs(vec![1, 0, 1]), 3)
            ]
        );
    }
}
