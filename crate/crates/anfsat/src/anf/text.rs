//! Text form: `a1*a2*a3 + a2*a3 + a3 + 1`, highest degree first, the
//! constant monomial last, `0` for the zero polynomial.

use std::fmt;
use std::str::FromStr;

use super::{AnfError, AnfPoly, Monomial};

impl fmt::Display for AnfPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let max_deg = self.monomials().last().map_or(0, Monomial::degree);
        let mut first = true;
        for d in (0..=max_deg).rev() {
            for m in self.monomials().iter().filter(|m| m.degree() == d) {
                if !first {
                    f.write_str(" + ")?;
                }
                first = false;
                write!(f, "{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for v in self.vars() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "a{v}")?;
        }
        Ok(())
    }
}

impl FromStr for AnfPoly {
    type Err = AnfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut terms = Vec::new();
        for term in s.split('+') {
            let term = term.trim();
            match term {
                "0" => continue,
                "1" => terms.push(Monomial::one()),
                _ => {
                    let mut vars = Vec::new();
                    for factor in term.split('*') {
                        let v = factor
                            .trim()
                            .strip_prefix('a')
                            .and_then(|d| d.parse::<u32>().ok())
                            .filter(|&v| v >= 1)
                            .ok_or_else(|| AnfError::Parse(term.to_string()))?;
                        vars.push(v);
                    }
                    terms.push(Monomial::from_vars(vars));
                }
            }
        }
        Ok(AnfPoly::from_monomials(terms))
    }
}
