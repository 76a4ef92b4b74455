//! Forms on the product with the shifted tangent interval: exact
//! polynomials in t with form coefficients, a tdot component, and the
//! Berezin integral.
//!
//! An element is written xi = xi0(t) + tdot xi1(t). The differential is
//! d + tdot d/dt, with tdot odd, and the Berezin integral extracts the
//! tdot component and integrates it over [0,1].

use std::fmt;

use crate::form::Form;
use crate::lie::LieAlgebra;
use crate::rational::{rat, ratio, Rational};

/// Polynomial in t with `Form` coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct FormPoly {
    // coefficient of t^m at position m; trailing zeros trimmed
    coeffs: Vec<Form>,
}

impl FormPoly {
    pub fn zero() -> FormPoly {
        FormPoly::default()
    }

    pub fn constant(f: Form) -> FormPoly {
        FormPoly::from_coeffs(vec![f])
    }

    pub fn from_coeffs(coeffs: Vec<Form>) -> FormPoly {
        let mut p = FormPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Form::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Form] {
        &self.coeffs
    }

    pub fn add(&self, other: &FormPoly) -> FormPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|m| {
                let a = self.coeffs.get(m).cloned().unwrap_or_default();
                let b = other.coeffs.get(m).cloned().unwrap_or_default();
                a.add(&b)
            })
            .collect();
        FormPoly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> FormPoly {
        FormPoly::from_coeffs(self.coeffs.iter().map(Form::neg).collect())
    }

    pub fn sub(&self, other: &FormPoly) -> FormPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> FormPoly {
        FormPoly::from_coeffs(self.coeffs.iter().map(|f| f.scale(c)).collect())
    }

    /// Multiply by the scalar polynomial with the given rational coefficients.
    pub fn mul_poly(&self, poly: &[Rational]) -> FormPoly {
        let mut coeffs = vec![Form::zero(); self.coeffs.len() + poly.len()];
        for (m, f) in self.coeffs.iter().enumerate() {
            for (k, c) in poly.iter().enumerate() {
                coeffs[m + k] = coeffs[m + k].add(&f.scale(c));
            }
        }
        FormPoly::from_coeffs(coeffs)
    }

    pub fn wedge(&self, other: &FormPoly) -> FormPoly {
        let mut coeffs = vec![
            Form::zero();
            (self.coeffs.len() + other.coeffs.len())
                .saturating_sub(1)
                .max(1)
        ];
        for (m, a) in self.coeffs.iter().enumerate() {
            for (k, b) in other.coeffs.iter().enumerate() {
                coeffs[m + k] = coeffs[m + k].add(&a.wedge(b));
            }
        }
        FormPoly::from_coeffs(coeffs)
    }

    pub fn eval(&self, t: &Rational) -> Form {
        let mut acc = Form::zero();
        let mut power = rat(1);
        for f in &self.coeffs {
            acc = acc.add(&f.scale(&power));
            power *= t.clone();
        }
        acc
    }

    pub fn derivative(&self) -> FormPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(m, f)| f.scale(&rat(m as i64)))
            .collect();
        FormPoly::from_coeffs(coeffs)
    }

    /// Exact integral over [0, 1].
    pub fn integrate01(&self) -> Form {
        let mut acc = Form::zero();
        for (m, f) in self.coeffs.iter().enumerate() {
            acc = acc.add(&f.scale(&ratio(1, m as i64 + 1)));
        }
        acc
    }

    pub fn map(&self, f: impl Fn(&Form) -> Form) -> FormPoly {
        FormPoly::from_coeffs(self.coeffs.iter().map(f).collect())
    }
}

impl fmt::Debug for FormPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormPoly(deg {})", self.coeffs.len().saturating_sub(1))
    }
}

/// xi = xi0(t) + tdot xi1(t).
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct TForm {
    pub xi0: FormPoly,
    pub xi1: FormPoly,
}

impl TForm {
    pub fn new(xi0: FormPoly, xi1: FormPoly) -> TForm {
        TForm { xi0, xi1 }
    }

    pub fn is_zero(&self) -> bool {
        self.xi0.is_zero() && self.xi1.is_zero()
    }

    pub fn add(&self, other: &TForm) -> TForm {
        TForm {
            xi0: self.xi0.add(&other.xi0),
            xi1: self.xi1.add(&other.xi1),
        }
    }

    pub fn sub(&self, other: &TForm) -> TForm {
        TForm {
            xi0: self.xi0.sub(&other.xi0),
            xi1: self.xi1.sub(&other.xi1),
        }
    }
}

/// The differential d + tdot d/dt on the product: sends xi0 + tdot xi1 to
/// d(xi0) + tdot (xi0' - d(xi1)).
pub fn t_differential(g: &LieAlgebra, xi: &TForm) -> TForm {
    TForm {
        xi0: xi.xi0.map(|f| g.ce_differential(f)),
        xi1: xi
            .xi0
            .derivative()
            .sub(&xi.xi1.map(|f| g.ce_differential(f))),
    }
}

/// Berezin integral: integrate the tdot component over [0,1]; a degree -1
/// map to ordinary forms.
pub fn berezin_integral(xi: &TForm) -> Form {
    xi.xi1.integrate01()
}
