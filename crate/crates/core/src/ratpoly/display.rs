use std::fmt;

use num_traits::{One, Signed};

use super::{ComplexPoly, Monomial, RatPoly};

fn write_monomial(f: &mut fmt::Formatter<'_>, vars: &[String], m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (v, &e) in vars.iter().zip(m.exponents()) {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{v}")?;
        } else {
            write!(f, "{v}^{e}")?;
        }
    }
    Ok(())
}

/// Canonical text form: terms in descending graded-lex order, written as
/// `c*x^i*y^j` and joined by `+`/`-`. Unit coefficients and unit exponents
/// are omitted; rational coefficients print as `num/den`.
impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().rev().enumerate() {
            let neg = c.is_negative();
            if neg {
                f.write_str("-")?;
            } else if i > 0 {
                f.write_str("+")?;
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
                continue;
            }
            if !a.is_one() {
                write!(f, "{a}*")?;
            }
            write_monomial(f, self.vars(), m)?;
        }
        Ok(())
    }
}

impl fmt::Display for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            if !m.is_one() {
                f.write_str("*")?;
                write_monomial(f, self.vars(), m)?;
            }
        }
        Ok(())
    }
}
