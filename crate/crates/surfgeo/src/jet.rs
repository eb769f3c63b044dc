//! Truncated derivative arithmetic for scalar functions of two variables.
//!
//! A [`Jet`] carries the value and every partial derivative of a smooth
//! function f(u, v) up to total order 3 at one base point, stored as raw
//! derivative values (not Taylor-normalized). Arithmetic propagates
//! derivatives with the truncated Leibniz rule and elementary functions use
//! the order-3 chain rule, so every coefficient of a combined jet is the
//! exact derivative of the combined function, up to floating-point rounding.
//!
//! Lower-order views [`Jet2`] and [`Jet1`] are produced when a jet is
//! differentiated: taking ∂u of an order-3 jet consumes one order, so the
//! result only knows derivatives up to order 2. Encoding the order in the
//! type prevents reading coefficients that were never tracked.

use thiserror::Error;

/// Storage order of the ten multi-indices (∂u-count, ∂v-count).
const MULTI_INDEX: [(usize, usize); 10] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
];

/// Binomial coefficients C(n, k) for n ≤ 3, used by the Leibniz product rule.
const BINOM: [[f64; 4]; 4] = [
    [1.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0],
    [1.0, 3.0, 3.0, 1.0],
];

/// Flat index of the coefficient holding ∂u^i ∂v^j.
#[inline(always)]
const fn pos(i: usize, j: usize) -> usize {
    match (i, j) {
        (0, 0) => 0,
        (1, 0) => 1,
        (0, 1) => 2,
        (2, 0) => 3,
        (1, 1) => 4,
        (0, 2) => 5,
        (3, 0) => 6,
        (2, 1) => 7,
        (1, 2) => 8,
        (0, 3) => 9,
        _ => unreachable!(),
    }
}

/// Errors raised by fallible jet operations. Arithmetic (`+ - * neg`) cannot
/// fail; only division and elementary functions have domain restrictions.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetError {
    /// Division by a jet whose value coefficient is exactly zero.
    #[error("division by a jet with zero value")]
    DivisionByZero,
    /// An elementary function was applied outside its domain.
    #[error("{func}: argument {value} outside domain")]
    Domain { func: &'static str, value: f64 },
}

/// Which coordinate a seed jet represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    U,
    V,
}

/// Order-3 jet of a scalar function of (u, v).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    c: [f64; 10],
}

impl Jet {
    /// Jet of the constant function x.
    pub fn constant(x: f64) -> Jet {
        let mut c = [0.0; 10];
        c[0] = x;
        Jet { c }
    }

    /// Jet of the coordinate function u or v at base value `base`:
    /// value `base`, first derivative 1 in its own slot, all else 0.
    pub fn variable(which: Var, base: f64) -> Jet {
        let mut c = [0.0; 10];
        c[0] = base;
        match which {
            Var::U => c[1] = 1.0,
            Var::V => c[2] = 1.0,
        }
        Jet { c }
    }

    /// Build a jet from raw coefficients in storage order
    /// (value, ∂u, ∂v, ∂uu, ∂uv, ∂vv, ∂uuu, ∂uuv, ∂uvv, ∂vvv).
    pub fn from_coeffs(c: [f64; 10]) -> Jet {
        Jet { c }
    }

    /// Raw coefficients in storage order.
    pub fn coeffs(&self) -> [f64; 10] {
        self.c
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// First partial: `d(0)` = ∂u, `d(1)` = ∂v.
    pub fn d(&self, i: usize) -> f64 {
        self.c[pos(1 - i, i)]
    }

    /// Second partial ∂_{u^i}∂_{u^j} with i, j ∈ {0 = u, 1 = v}.
    pub fn dd(&self, i: usize, j: usize) -> f64 {
        let vcount = i + j;
        self.c[pos(2 - vcount, vcount)]
    }

    /// Third partial with each index in {0 = u, 1 = v}.
    pub fn ddd(&self, i: usize, j: usize, k: usize) -> f64 {
        let vcount = i + j + k;
        self.c[pos(3 - vcount, vcount)]
    }

    /// The jet of ∂f/∂u^i (one derivative order is consumed).
    pub fn deriv(&self, i: usize) -> Jet2 {
        let c = &self.c;
        let out = if i == 0 {
            [c[1], c[3], c[4], c[6], c[7], c[8], 0.0, 0.0, 0.0, 0.0]
        } else {
            [c[2], c[4], c[5], c[7], c[8], c[9], 0.0, 0.0, 0.0, 0.0]
        };
        Jet2(Jet { c: out })
    }

    /// Forget third-order coefficients, viewing this jet at order 2.
    pub fn trunc2(&self) -> Jet2 {
        let mut c = self.c;
        c[6] = 0.0;
        c[7] = 0.0;
        c[8] = 0.0;
        c[9] = 0.0;
        Jet2(Jet { c })
    }

    /// True when every tracked coefficient is finite.
    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|x| x.is_finite())
    }

    /// Composition with a univariate function φ given by its value and first
    /// three derivatives at `self.value()`. Implements the order-3 chain rule.
    fn compose(&self, d: [f64; 4]) -> Jet {
        let a = &self.c;
        let (au, av) = (a[1], a[2]);
        let (auu, auv, avv) = (a[3], a[4], a[5]);
        let (auuu, auuv, auvv, avvv) = (a[6], a[7], a[8], a[9]);
        Jet {
            c: [
                d[0],
                d[1] * au,
                d[1] * av,
                d[2] * au * au + d[1] * auu,
                d[2] * au * av + d[1] * auv,
                d[2] * av * av + d[1] * avv,
                d[3] * au * au * au + 3.0 * d[2] * au * auu + d[1] * auuu,
                d[3] * au * au * av + d[2] * (2.0 * au * auv + av * auu) + d[1] * auuv,
                d[3] * au * av * av + d[2] * (2.0 * av * auv + au * avv) + d[1] * auvv,
                d[3] * av * av * av + 3.0 * d[2] * av * avv + d[1] * avvv,
            ],
        }
    }

    /// Multiplicative inverse 1/f. Fails when the value is exactly 0.
    pub fn recip(&self) -> Result<Jet, JetError> {
        let x = self.c[0];
        if x == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        let ix = 1.0 / x;
        Ok(self.compose([ix, -ix * ix, 2.0 * ix * ix * ix, -6.0 * ix * ix * ix * ix]))
    }

    /// Quotient self / rhs. Fails when rhs.value() is exactly 0.
    pub fn div(&self, rhs: &Jet) -> Result<Jet, JetError> {
        Ok(*self * rhs.recip()?)
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.c[0].sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.c[0].sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn exp(&self) -> Jet {
        let e = self.c[0].exp();
        self.compose([e, e, e, e])
    }

    /// Natural logarithm; requires value > 0.
    pub fn ln(&self) -> Result<Jet, JetError> {
        let x = self.c[0];
        if x <= 0.0 {
            return Err(JetError::Domain { func: "log", value: x });
        }
        let ix = 1.0 / x;
        Ok(self.compose([x.ln(), ix, -ix * ix, 2.0 * ix * ix * ix]))
    }

    /// Square root; requires value > 0 (derivatives blow up at 0).
    pub fn sqrt(&self) -> Result<Jet, JetError> {
        let x = self.c[0];
        if x <= 0.0 {
            return Err(JetError::Domain { func: "sqrt", value: x });
        }
        let r = x.sqrt();
        let d1 = 0.5 / r;
        let d2 = -0.25 / (x * r);
        let d3 = 0.375 / (x * x * r);
        Ok(self.compose([r, d1, d2, d3]))
    }

    /// Integer power by binary exponentiation — exact for polynomial jets.
    /// Negative exponents require a nonzero value.
    pub fn powi(&self, k: i32) -> Result<Jet, JetError> {
        if k == 0 {
            return Ok(Jet::constant(1.0));
        }
        let mut n = k.unsigned_abs();
        let mut base = *self;
        let mut acc: Option<Jet> = None;
        while n > 0 {
            if n & 1 == 1 {
                acc = Some(match acc {
                    Some(a) => a * base,
                    None => base,
                });
            }
            n >>= 1;
            if n > 0 {
                base = base * base;
            }
        }
        let pow = acc.expect("k != 0");
        if k < 0 {
            pow.recip()
        } else {
            Ok(pow)
        }
    }

    /// Real power. Integral exponents (within i32 range) are lowered to
    /// [`Jet::powi`]; other exponents use exp(p·log(self)), which requires a
    /// strictly positive value.
    pub fn powf(&self, p: f64) -> Result<Jet, JetError> {
        if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
            return self.powi(p as i32);
        }
        if self.c[0] <= 0.0 {
            return Err(JetError::Domain { func: "pow", value: self.c[0] });
        }
        Ok((self.ln()? * Jet::constant(p)).exp())
    }
}

impl std::ops::Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(rhs.c.iter()) {
            *a += b;
        }
        Jet { c }
    }
}

impl std::ops::Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(rhs.c.iter()) {
            *a -= b;
        }
        Jet { c }
    }
}

impl std::ops::Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        let mut c = self.c;
        for a in c.iter_mut() {
            *a = -*a;
        }
        Jet { c }
    }
}

impl std::ops::Mul for Jet {
    type Output = Jet;
    /// Truncated Leibniz rule: ∂^(a,b)(fg) = Σ C(a,i)C(b,j) ∂^(i,j)f ∂^(a−i,b−j)g.
    fn mul(self, rhs: Jet) -> Jet {
        let mut out = [0.0; 10];
        for (t, &(a, b)) in MULTI_INDEX.iter().enumerate() {
            let mut acc = 0.0;
            for i in 0..=a {
                for j in 0..=b {
                    acc += BINOM[a][i]
                        * BINOM[b][j]
                        * self.c[pos(i, j)]
                        * rhs.c[pos(a - i, b - j)];
                }
            }
            out[t] = acc;
        }
        Jet { c: out }
    }
}

impl std::ops::Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        let mut c = self.c;
        for a in c.iter_mut() {
            *a *= rhs;
        }
        Jet { c }
    }
}

/// Order-2 jet: value and derivatives through total order 2. Produced by
/// differentiating a [`Jet`] once, or by truncation. Internally this reuses
/// the order-3 arithmetic with the third-order slots ignored: the Leibniz and
/// chain rules never let higher-order slots contaminate lower-order ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2(Jet);

impl Jet2 {
    pub fn constant(x: f64) -> Jet2 {
        Jet2(Jet::constant(x))
    }

    pub fn value(&self) -> f64 {
        self.0.value()
    }

    pub fn d(&self, i: usize) -> f64 {
        self.0.d(i)
    }

    pub fn dd(&self, i: usize, j: usize) -> f64 {
        self.0.dd(i, j)
    }

    /// The order-1 jet of ∂f/∂u^i.
    pub fn deriv(&self, i: usize) -> Jet1 {
        Jet1(self.0.deriv(i).0)
    }

    pub fn trunc1(&self) -> Jet1 {
        let mut c = self.0.c;
        for slot in c.iter_mut().skip(3) {
            *slot = 0.0;
        }
        Jet1(Jet { c })
    }

    pub fn is_finite(&self) -> bool {
        self.0.c[..6].iter().all(|x| x.is_finite())
    }

    pub fn recip(&self) -> Result<Jet2, JetError> {
        Ok(Jet2(self.0.recip()?))
    }

    pub fn div(&self, rhs: &Jet2) -> Result<Jet2, JetError> {
        Ok(Jet2(self.0.div(&rhs.0)?))
    }

    pub fn sqrt(&self) -> Result<Jet2, JetError> {
        Ok(Jet2(self.0.sqrt()?))
    }

    pub fn sin(&self) -> Jet2 {
        Jet2(self.0.sin())
    }

    pub fn cos(&self) -> Jet2 {
        Jet2(self.0.cos())
    }
}

impl std::ops::Add for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Jet2) -> Jet2 {
        Jet2(self.0 + rhs.0)
    }
}

impl std::ops::Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        Jet2(self.0 - rhs.0)
    }
}

impl std::ops::Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2(-self.0)
    }
}

impl std::ops::Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        Jet2(self.0 * rhs.0)
    }
}

impl std::ops::Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: f64) -> Jet2 {
        Jet2(self.0 * rhs)
    }
}

/// Order-1 jet: value and first derivatives only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet1(Jet);

impl Jet1 {
    pub fn constant(x: f64) -> Jet1 {
        Jet1(Jet::constant(x))
    }

    pub fn value(&self) -> f64 {
        self.0.value()
    }

    pub fn d(&self, i: usize) -> f64 {
        self.0.d(i)
    }

    pub fn is_finite(&self) -> bool {
        self.0.c[..3].iter().all(|x| x.is_finite())
    }

    pub fn sqrt(&self) -> Result<Jet1, JetError> {
        Ok(Jet1(self.0.sqrt()?))
    }

    pub fn recip(&self) -> Result<Jet1, JetError> {
        Ok(Jet1(self.0.recip()?))
    }

    pub fn div(&self, rhs: &Jet1) -> Result<Jet1, JetError> {
        Ok(Jet1(self.0.div(&rhs.0)?))
    }
}

impl std::ops::Add for Jet1 {
    type Output = Jet1;
    fn add(self, rhs: Jet1) -> Jet1 {
        Jet1(self.0 + rhs.0)
    }
}

impl std::ops::Sub for Jet1 {
    type Output = Jet1;
    fn sub(self, rhs: Jet1) -> Jet1 {
        Jet1(self.0 - rhs.0)
    }
}

impl std::ops::Neg for Jet1 {
    type Output = Jet1;
    fn neg(self) -> Jet1 {
        Jet1(-self.0)
    }
}

impl std::ops::Mul for Jet1 {
    type Output = Jet1;
    fn mul(self, rhs: Jet1) -> Jet1 {
        Jet1(self.0 * rhs.0)
    }
}

impl std::ops::Mul<f64> for Jet1 {
    type Output = Jet1;
    fn mul(self, rhs: f64) -> Jet1 {
        Jet1(self.0 * rhs)
    }
}
