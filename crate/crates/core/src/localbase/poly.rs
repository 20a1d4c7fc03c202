//! Monomials and truncated polynomials in `g_1..g_n`, dense over a fixed
//! monomial table.
//!
//! Monomials are ordered by total degree, and within a degree by
//! lexicographically descending exponent vectors, so `g1^2, g1*g2, g2^2`
//! for two variables. This is the graded-lex order used for leading
//! terms, quotient bases and all printed polynomials.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::matrix::{self, Vector};
use crate::scalar::{self, Scalar};

pub type Exponents = Vec<u16>;

/// All monomials in `n` variables up to a fixed total degree, with index
/// lookups and a product table.
#[derive(Debug, Clone)]
pub struct MonomialCtx {
    n: usize,
    max_deg: usize,
    monos: Vec<Exponents>,
    index: BTreeMap<Exponents, usize>,
    degrees: Vec<usize>,
}

impl MonomialCtx {
    pub fn new(n: usize, max_deg: usize) -> MonomialCtx {
        let mut monos = Vec::new();
        for d in 0..=max_deg {
            let mut bucket = Vec::new();
            enumerate_degree(n, d, &mut Vec::new(), &mut bucket);
            monos.extend(bucket);
        }
        let index = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let degrees = monos.iter().map(|m| m.iter().map(|&e| e as usize).sum()).collect();
        MonomialCtx { n, max_deg, monos, index, degrees }
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn max_deg(&self) -> usize {
        self.max_deg
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn exponents(&self, idx: usize) -> &Exponents {
        &self.monos[idx]
    }

    pub fn degree(&self, idx: usize) -> usize {
        self.degrees[idx]
    }

    pub fn lookup(&self, expo: &Exponents) -> Option<usize> {
        self.index.get(expo).copied()
    }

    pub fn unit(&self) -> usize {
        0
    }

    /// Index of the variable monomial `g_{v+1}`.
    pub fn var_mono(&self, v: usize) -> usize {
        let mut e = alloc::vec![0u16; self.n];
        e[v] = 1;
        self.lookup(&e).expect("degree 1 is within every table")
    }

    /// Product of two monomials; `None` when it exceeds the truncation.
    pub fn mul_mono(&self, i: usize, j: usize) -> Option<usize> {
        if self.degree(i) + self.degree(j) > self.max_deg {
            return None;
        }
        let e: Exponents = self.monos[i]
            .iter()
            .zip(&self.monos[j])
            .map(|(a, b)| a + b)
            .collect();
        self.lookup(&e)
    }

    pub fn mono_string(&self, idx: usize, names: &[String]) -> String {
        let e = &self.monos[idx];
        if self.degree(idx) == 0 {
            return String::from("1");
        }
        let mut parts = Vec::new();
        for (v, &p) in e.iter().enumerate() {
            match p {
                0 => {}
                1 => parts.push(names[v].clone()),
                _ => parts.push(alloc::format!("{}^{}", names[v], p)),
            }
        }
        parts.join("*")
    }
}

fn enumerate_degree(n: usize, d: usize, prefix: &mut Vec<u16>, out: &mut Vec<Exponents>) {
    if n == 0 {
        if d == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    let remaining_vars = n - 1;
    // descending lex: highest exponent on the earliest variable first
    for e in (0..=d).rev() {
        prefix.push(e as u16);
        if remaining_vars == 0 {
            if e == d {
                out.push(prefix.clone());
            }
        } else {
            enumerate_degree(remaining_vars, d - e, prefix, out);
        }
        prefix.pop();
    }
}

/// A polynomial truncated to the table's maximal degree, dense.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub coeffs: Vector,
}

impl Poly {
    pub fn zero(ctx: &MonomialCtx) -> Poly {
        Poly { coeffs: matrix::zero_vec(ctx.len()) }
    }

    pub fn mono(ctx: &MonomialCtx, idx: usize) -> Poly {
        Poly { coeffs: matrix::unit_vec(ctx.len(), idx) }
    }

    pub fn is_zero(&self) -> bool {
        matrix::vec_is_zero(&self.coeffs)
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &Poly) {
        matrix::vec_add_scaled(&mut self.coeffs, c, &other.coeffs);
    }

    pub fn scale(&mut self, c: &Scalar) {
        matrix::vec_scale(&mut self.coeffs, c);
    }

    /// Index of the leading monomial: the first nonzero coefficient in
    /// table order (lowest degree, then graded-lex).
    pub fn lead(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !scalar::is_zero(c))
    }

    pub fn lead_degree(&self, ctx: &MonomialCtx) -> Option<usize> {
        self.lead().map(|i| ctx.degree(i))
    }

    /// Highest degree with a nonzero coefficient.
    pub fn top_degree(&self, ctx: &MonomialCtx) -> Option<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .find(|(_, c)| !scalar::is_zero(c))
            .map(|(i, _)| ctx.degree(i))
    }

    /// Multiplies by the monomial `m`, dropping anything beyond the
    /// truncation degree.
    pub fn mul_mono(&self, ctx: &MonomialCtx, m: usize) -> Poly {
        let mut out = Poly::zero(ctx);
        for (i, c) in self.coeffs.iter().enumerate() {
            if scalar::is_zero(c) {
                continue;
            }
            if let Some(t) = ctx.mul_mono(i, m) {
                out.coeffs[t] += c;
            }
        }
        out
    }

    /// Re-expresses the polynomial over a larger table with the same
    /// variable count.
    pub fn lift(&self, from: &MonomialCtx, to: &MonomialCtx) -> Poly {
        assert_eq!(from.vars(), to.vars());
        let mut out = Poly::zero(to);
        for (i, c) in self.coeffs.iter().enumerate() {
            if !scalar::is_zero(c) {
                let idx = to.lookup(from.exponents(i)).expect("target table is larger");
                out.coeffs[idx] = c.clone();
            }
        }
        out
    }

    pub fn constant_part(&self) -> &Scalar {
        &self.coeffs[0]
    }

    pub fn has_low_degree_terms(&self, ctx: &MonomialCtx) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .any(|(i, c)| ctx.degree(i) <= 1 && !scalar::is_zero(c))
    }

    pub fn to_string(&self, ctx: &MonomialCtx, names: &[String]) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if scalar::is_zero(c) {
                continue;
            }
            let mono = ctx.mono_string(i, names);
            let coeff = scalar::display(c);
            let piece = if mono == "1" {
                coeff
            } else if coeff == "1" {
                mono
            } else if coeff == "-1" {
                alloc::format!("-{mono}")
            } else {
                alloc::format!("{coeff}*{mono}")
            };
            if parts.is_empty() || piece.starts_with('-') {
                parts.push(piece);
            } else {
                parts.push(alloc::format!("+{piece}"));
            }
        }
        if parts.is_empty() {
            String::from("0")
        } else {
            parts.concat()
        }
    }
}

pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| alloc::format!("g{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn monomial_order_is_graded_lex() {
        let ctx = MonomialCtx::new(2, 2);
        let expos: Vec<Exponents> =
            (0..ctx.len()).map(|i| ctx.exponents(i).clone()).collect();
        assert_eq!(
            expos,
            alloc::vec![
                alloc::vec![0, 0],
                alloc::vec![1, 0],
                alloc::vec![0, 1],
                alloc::vec![2, 0],
                alloc::vec![1, 1],
                alloc::vec![0, 2]
            ]
        );
    }

    #[test]
    fn product_respects_truncation() {
        let ctx = MonomialCtx::new(1, 3);
        let g = ctx.var_mono(0);
        let g2 = ctx.mul_mono(g, g).unwrap();
        let g3 = ctx.mul_mono(g2, g).unwrap();
        assert_eq!(ctx.degree(g3), 3);
        assert_eq!(ctx.mul_mono(g3, g), None);
    }

    #[test]
    fn poly_printing() {
        let ctx = MonomialCtx::new(2, 2);
        let names = default_names(2);
        let mut p = Poly::mono(&ctx, ctx.lookup(&alloc::vec![2, 0]).unwrap());
        p.add_scaled(&int(-3), &Poly::mono(&ctx, ctx.lookup(&alloc::vec![0, 1]).unwrap()));
        assert_eq!(p.to_string(&ctx, &names), "-3*g2+g1^2");
        assert_eq!(Poly::zero(&ctx).to_string(&ctx, &names), "0");
    }
}
