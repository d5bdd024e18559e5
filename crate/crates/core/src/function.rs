//! Test functions fed to the operators, with whatever analytic data is known
//! about them (moduli of continuity, sup norm, Lipschitz class).

use std::fmt;
use std::sync::Arc;

type RealMap = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Growth of `f` at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthClass {
    Bounded,
    /// `|f(x)| <= C (1 + x^2)`: the largest class the operators accept.
    SubQuadratic,
}

/// Hölder data `|f(u) - f(v)| <= constant * |u - v|^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lipschitz {
    pub constant: f64,
    pub exponent: f64,
}

/// A real function on `[0, inf)` together with its known analytic properties.
#[derive(Clone)]
pub struct ScalarFunction {
    name: String,
    eval: RealMap,
    growth: GrowthClass,
    smooth: bool,
    modulus: Option<RealMap>,
    second_modulus: Option<RealMap>,
    sup_norm: Option<f64>,
    lipschitz: Option<Lipschitz>,
}

impl ScalarFunction {
    pub fn new<F>(name: impl Into<String>, growth: GrowthClass, eval: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            eval: Arc::new(eval),
            growth,
            smooth: true,
            modulus: None,
            second_modulus: None,
            sup_norm: None,
            lipschitz: None,
        }
    }

    /// Attach the exact modulus of continuity `delta -> omega(f; delta)` on `[0, inf)`.
    pub fn with_modulus<F>(mut self, modulus: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.modulus = Some(Arc::new(modulus));
        self
    }

    /// Attach the exact second modulus `delta -> omega_2(f; delta)`.
    pub fn with_second_modulus<F>(mut self, modulus: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.second_modulus = Some(Arc::new(modulus));
        self
    }

    pub fn with_sup_norm(mut self, norm: f64) -> Self {
        self.sup_norm = Some(norm);
        self
    }

    pub fn with_lipschitz(mut self, constant: f64, exponent: f64) -> Self {
        self.lipschitz = Some(Lipschitz { constant, exponent });
        self
    }

    /// Mark the function as having a kink or cusp, which degrades Gaussian quadrature.
    pub fn non_smooth(mut self) -> Self {
        self.smooth = false;
        self
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn growth(&self) -> GrowthClass {
        self.growth
    }

    pub fn is_smooth(&self) -> bool {
        self.smooth
    }

    pub fn known_modulus(&self, delta: f64) -> Option<f64> {
        self.modulus.as_ref().map(|m| m(delta))
    }

    pub fn known_second_modulus(&self, delta: f64) -> Option<f64> {
        self.second_modulus.as_ref().map(|m| m(delta))
    }

    pub fn sup_norm(&self) -> Option<f64> {
        self.sup_norm
    }

    pub fn lipschitz(&self) -> Option<Lipschitz> {
        self.lipschitz
    }

    /// `f(x) = c`.
    pub fn constant(c: f64) -> Self {
        Self::affine(0.0, c)
    }

    /// `f(x) = a x + b`.
    pub fn affine(a: f64, b: f64) -> Self {
        let growth = if a == 0.0 { GrowthClass::Bounded } else { GrowthClass::SubQuadratic };
        let mut f = Self::new(format!("affine({a},{b})"), growth, move |x| a * x + b)
            .with_modulus(move |d| a.abs() * d)
            .with_second_modulus(|_| 0.0);
        if a == 0.0 {
            f = f.with_sup_norm(b.abs());
        }
        if a != 0.0 {
            f = f.with_lipschitz(a.abs(), 1.0);
        }
        f
    }

    /// `f(x) = x^j`. No modulus is attached for `j >= 2` since it is not uniformly continuous.
    pub fn monomial(j: u32) -> Self {
        match j {
            0 => Self::constant(1.0),
            1 => Self::affine(1.0, 0.0),
            2 => Self::new("poly2", GrowthClass::SubQuadratic, |x| x * x).with_second_modulus(|d| 2.0 * d * d),
            _ => Self::new(format!("pow{j}"), GrowthClass::SubQuadratic, move |x| x.powi(j as i32)),
        }
    }

    /// `f(x) = e^{-x}`.
    pub fn exp_decay() -> Self {
        Self::new("exp_decay", GrowthClass::Bounded, |x| (-x).exp())
            .with_modulus(|d| -(-d).exp_m1())
            .with_second_modulus(|d| (-d).exp_m1().powi(2))
            .with_sup_norm(1.0)
    }

    /// `f(x) = sin x`.
    pub fn sine() -> Self {
        use std::f64::consts::PI;
        Self::new("sine", GrowthClass::Bounded, f64::sin)
            .with_modulus(|d| 2.0 * (d.min(PI) / 2.0).sin())
            .with_second_modulus(|d| 2.0 * (1.0 - d.min(PI).cos()))
            .with_sup_norm(1.0)
    }

    /// `f(x) = 1 / (1 + x^2)`. Moduli are not known in closed form.
    pub fn runge() -> Self {
        Self::new("runge", GrowthClass::Bounded, |x| 1.0 / (1.0 + x * x)).with_sup_norm(1.0)
    }

    /// `f(x) = |x - c|^alpha` for `0 < alpha <= 1`, which lies in `Lip_1(alpha)`.
    pub fn abs_pow(c: f64, alpha: f64) -> Self {
        Self::new(format!("abs_pow({c},{alpha})"), GrowthClass::SubQuadratic, move |x| (x - c).abs().powf(alpha))
            .with_modulus(move |d| d.powf(alpha))
            .with_lipschitz(1.0, alpha)
            .non_smooth()
    }
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("name", &self.name)
            .field("growth", &self.growth)
            .field("smooth", &self.smooth)
            .field("known_modulus", &self.modulus.is_some())
            .field("sup_norm", &self.sup_norm)
            .field("lipschitz", &self.lipschitz)
            .finish()
    }
}
