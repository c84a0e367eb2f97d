//! Prime-field scalars, dense polynomials over F_p, F_p matrices, and u64
//! integer factorization. Internal plumbing for the field tower.

/// Scalar arithmetic mod p. p is assumed prime and > 1; products go through
/// u128 so any p below 2^64 is safe.
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = (a as u128 + b as u128) % p as u128;
    s as u64
}

pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = (a as u128 + p as u128 - b as u128 % p as u128) % p as u128;
    s as u64
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// Dense polynomial over F_p, little-endian coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct FpPoly {
    pub coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(mut coeffs: Vec<u64>, p: u64) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { coeffs }
    }

    pub fn zero() -> Self {
        FpPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        FpPoly { coeffs: vec![1] }
    }

    /// The monomial x.
    pub fn x() -> Self {
        FpPoly { coeffs: vec![0, 1] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None encodes deg(0) = -infinity.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    #[cfg(test)]
    pub fn add(&self, rhs: &Self, p: u64) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = rhs.coeffs.get(i).copied().unwrap_or(0);
            *o = add_mod(a, b, p);
        }
        FpPoly::new(out, p)
    }


    pub fn sub(&self, rhs: &Self, p: u64) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = rhs.coeffs.get(i).copied().unwrap_or(0);
            *o = sub_mod(a, b, p);
        }
        FpPoly::new(out, p)
    }

    pub fn mul(&self, rhs: &Self, p: u64) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return FpPoly::zero();
        }
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(a, b, p), p);
            }
        }
        FpPoly::new(out, p)
    }

    /// Euclidean division, divisor nonzero: self = q*d + r with deg r < deg d.
    pub fn divmod(&self, d: &Self, p: u64) -> (Self, Self) {
        assert!(!d.is_zero());
        let dd = d.deg().unwrap();
        let lead_inv = inv_mod(*d.coeffs.last().unwrap(), p);
        let mut r = self.coeffs.clone();
        let mut q = vec![0u64; self.coeffs.len().saturating_sub(dd)];
        while r.len() > dd {
            let c = mul_mod(*r.last().unwrap(), lead_inv, p);
            let shift = r.len() - 1 - dd;
            if c != 0 {
                q[shift] = c;
                for (i, &dc) in d.coeffs.iter().enumerate() {
                    r[shift + i] = sub_mod(r[shift + i], mul_mod(c, dc, p), p);
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
            if r.len() <= dd {
                break;
            }
        }
        (FpPoly::new(q, p), FpPoly::new(r, p))
    }

    pub fn rem(&self, d: &Self, p: u64) -> Self {
        self.divmod(d, p).1
    }

    /// Monic gcd.
    pub fn gcd(&self, rhs: &Self, p: u64) -> Self {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b, p);
            a = b;
            b = r;
        }
        a.monic(p)
    }

    pub fn monic(&self, p: u64) -> Self {
        match self.coeffs.last() {
            None => FpPoly::zero(),
            Some(&l) if l == 1 => self.clone(),
            Some(&l) => {
                let li = inv_mod(l, p);
                FpPoly::new(self.coeffs.iter().map(|&c| mul_mod(c, li, p)).collect(), p)
            }
        }
    }

    /// self^p mod f, by square-and-multiply on the exponent p.
    fn pow_p_mod(&self, f: &Self, p: u64) -> Self {
        let mut base = self.rem(f, p);
        let mut e = p;
        let mut acc = FpPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, p).rem(f, p);
            }
            base = base.mul(&base, p).rem(f, p);
            e >>= 1;
        }
        acc
    }

    /// x^(p^k) mod f via k successive Frobenius steps.
    fn frobenius_power(f: &Self, k: usize, p: u64) -> Self {
        let mut g = FpPoly::x().rem(f, p);
        for _ in 0..k {
            g = g.pow_p_mod(f, p);
        }
        g
    }

    /// Rabin irreducibility test for a monic polynomial of degree >= 1.
    pub fn is_irreducible(&self, p: u64) -> bool {
        let n = match self.deg() {
            Some(n) if n >= 1 => n,
            _ => return false,
        };
        let f = self.monic(p);
        let x = FpPoly::x().rem(&f, p);
        // x^(p^n) == x mod f
        if FpPoly::frobenius_power(&f, n, p) != x {
            return false;
        }
        for (q, _) in factor_u64(n as u64) {
            let h = FpPoly::frobenius_power(&f, n / q as usize, p).sub(&x, p);
            if f.gcd(&h, p).deg() != Some(0) {
                return false;
            }
        }
        true
    }
}

/// Lexicographically smallest monic irreducible of degree n over F_p: scans
/// x^n + (base-p digits of c) for c = 0, 1, 2, ...
pub(crate) fn smallest_irreducible(p: u64, n: usize) -> FpPoly {
    assert!(n >= 1);
    let mut c: u64 = 0;
    loop {
        let mut coeffs = vec![0u64; n + 1];
        coeffs[n] = 1;
        let mut v = c;
        let mut i = 0;
        while v > 0 {
            coeffs[i] = v % p;
            v /= p;
            i += 1;
        }
        assert!(i <= n, "no irreducible of degree {n} found below x^n + p^n");
        let f = FpPoly::new(coeffs, p);
        if f.is_irreducible(p) {
            return f;
        }
        c += 1;
    }
}

/// Dense matrix over F_p, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct FpMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
    pub p: u64,
}

impl FpMat {
    pub fn zero(rows: usize, cols: usize, p: u64) -> Self {
        FpMat { rows, cols, data: vec![0; rows * cols], p }
    }

    pub fn identity(n: usize, p: u64) -> Self {
        let mut m = FpMat::zero(n, n, p);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    pub fn at(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![0u64; self.rows];
        for r in 0..self.rows {
            let mut acc = 0u64;
            for c in 0..self.cols {
                acc = add_mod(acc, mul_mod(self.at(r, c), v[c], self.p), self.p);
            }
            out[r] = acc;
        }
        out
    }

    /// In-place reduction to reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.at(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..self.cols {
                    self.data.swap(pr * self.cols + c, row * self.cols + c);
                }
            }
            let inv = inv_mod(self.at(row, col), p);
            for c in col..self.cols {
                let v = mul_mod(self.at(row, c), inv, p);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && self.at(r, col) != 0 {
                    let f = self.at(r, col);
                    for c in col..self.cols {
                        let v = sub_mod(self.at(r, c), mul_mod(f, self.at(row, c), p), p);
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    #[cfg(test)]
    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }


    /// Inverse of a square matrix, None if singular.
    pub fn inverse(&self) -> Option<FpMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = FpMat::zero(n, 2 * n, self.p);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.at(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let pivots = aug.rref();
        if pivots != (0..n).collect::<Vec<_>>() {
            return None;
        }
        let mut inv = FpMat::zero(n, n, self.p);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.at(r, n + c));
            }
        }
        Some(inv)
    }

    /// Solves self * x = b. Returns None when inconsistent; when
    /// underdetermined returns one solution with free variables at 0.
    /// `unique` is true iff every column is a pivot.
    pub fn solve(&self, b: &[u64]) -> Option<(Vec<u64>, bool)> {
        assert_eq!(b.len(), self.rows);
        let mut aug = FpMat::zero(self.rows, self.cols + 1, self.p);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.at(r, c));
            }
            aug.set(r, self.cols, b[r]);
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.at(r, self.cols);
        }
        Some((x, pivots.len() == self.cols))
    }

    /// Basis of the right kernel {v : self * v = 0}.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &fc in &free {
            let mut v = vec![0u64; self.cols];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = sub_mod(0, m.at(r, fc), p);
            }
            basis.push(v);
        }
        basis
    }
}

/// Deterministic Miller-Rabin for u64.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    // Brent's cycle variant; n odd composite, not a prime power edge handled by caller loop.
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| add_mod(mul_mod(x, x, n), c, n);
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Prime factorization of n >= 1, sorted, as (prime, multiplicity) pairs.
pub(crate) fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    let mut factors: Vec<u64> = Vec::new();
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m < 2 {
            continue;
        }
        if is_prime_u64(m) {
            factors.push(m);
            continue;
        }
        let mut m = m;
        for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            while m % q == 0 {
                factors.push(q);
                m /= q;
            }
        }
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            factors.push(m);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    factors.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for f in factors {
        match out.last_mut() {
            Some((q, e)) if *q == f => *e += 1,
            _ => out.push((f, 1)),
        }
    }
    out
}
