//! Parser for local-base specifications like `k`, `k[t] @ 3`,
//! `k[x,y]/(x^2, x*y) @ 4`, and for the polynomial expressions used in
//! deformation tables and homomorphism images.
//!
//! Coefficients are exact rationals written `p` or `p/q`; monomials use
//! `*` and `^`. The truncation order defaults to the largest total
//! degree appearing in the ideal generators; a quotient with no
//! generators needs an explicit `@ order` to be finite-dimensional.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use opdef_core::localbase::{LocalTruncation, MonomialCtx, Poly};
use opdef_core::scalar::{self, Scalar};

/// A parsed base: the truncation plus the user's variable names.
#[derive(Debug, Clone)]
pub struct ParsedBase {
    pub truncation: LocalTruncation,
    pub names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Comma,
    LParen,
    RParen,
    LBracket,
    RBracket,
    At,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            ',' => {
                out.push(Tok::Comma);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            '[' => {
                out.push(Tok::LBracket);
                i += 1;
            }
            ']' => {
                out.push(Tok::RBracket);
                i += 1;
            }
            '@' => {
                out.push(Tok::At);
                i += 1;
            }
            _ if c.is_ascii_digit() => {
                let mut num = String::new();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    num.push(chars[i]);
                    i += 1;
                }
                out.push(Tok::Num(num));
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let mut ident = String::new();
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
                {
                    ident.push(chars[i]);
                    i += 1;
                }
                out.push(Tok::Ident(ident));
            }
            _ => bail!("unexpected character `{c}` in expression"),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: &Tok) -> Result<()> {
        match self.next() {
            Some(x) if x == t => Ok(()),
            other => bail!("expected {t:?}, found {other:?}"),
        }
    }

    /// rational coefficient: `p` or `p/q`
    fn rational(&mut self, negative: bool) -> Result<Scalar> {
        let num = match self.next() {
            Some(Tok::Num(n)) => n.clone(),
            other => bail!("expected a number, found {other:?}"),
        };
        let mut text = if negative { format!("-{num}") } else { num };
        if self.peek() == Some(&Tok::Slash) {
            // only a fraction if a number follows; the ring-level slash
            // is consumed by the base-spec parser before polynomials
            if let Some(Tok::Num(_)) = self.toks.get(self.pos + 1) {
                self.next();
                if let Some(Tok::Num(d)) = self.next() {
                    text = format!("{text}/{d}");
                }
            }
        }
        scalar::parse(&text).ok_or_else(|| anyhow!("bad rational `{text}`"))
    }

    /// term := [sign] [coef *] factor (* factor)* | [sign] coef
    fn term(
        &mut self,
        ctx: &MonomialCtx,
        vars: &BTreeMap<String, usize>,
        negative: bool,
    ) -> Result<Poly> {
        let mut coeff = scalar::sign_scalar(negative);
        let mut expo = vec![0u16; ctx.vars()];
        loop {
            match self.peek() {
                Some(Tok::Num(_)) => {
                    let c = self.rational(false)?;
                    coeff *= c;
                }
                Some(Tok::Ident(name)) => {
                    let name = name.clone();
                    self.next();
                    let &v = vars
                        .get(&name)
                        .ok_or_else(|| anyhow!("unknown variable `{name}`"))?;
                    let mut power = 1u16;
                    if self.peek() == Some(&Tok::Caret) {
                        self.next();
                        match self.next() {
                            Some(Tok::Num(n)) => {
                                power = n.parse().context("exponent")?;
                            }
                            other => bail!("expected exponent, found {other:?}"),
                        }
                    }
                    expo[v] += power;
                }
                _ => bail!("expected a coefficient or variable"),
            }
            if self.peek() == Some(&Tok::Star) {
                self.next();
                continue;
            }
            break;
        }
        let total: usize = expo.iter().map(|&e| e as usize).sum();
        if total > ctx.max_deg() {
            bail!(
                "monomial degree {total} exceeds the truncation order {}",
                ctx.max_deg()
            );
        }
        let idx = ctx.lookup(&expo).expect("within the window");
        let mut p = Poly::zero(ctx);
        p.coeffs[idx] = coeff;
        Ok(p)
    }

    fn poly(&mut self, ctx: &MonomialCtx, vars: &BTreeMap<String, usize>) -> Result<Poly> {
        let mut negative = false;
        if self.peek() == Some(&Tok::Minus) {
            self.next();
            negative = true;
        } else if self.peek() == Some(&Tok::Plus) {
            self.next();
        }
        let mut acc = self.term(ctx, vars, negative)?;
        loop {
            let neg = match self.peek() {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                _ => break,
            };
            self.next();
            let t = self.term(ctx, vars, neg)?;
            acc.add_scaled(&scalar::one(), &t);
        }
        Ok(acc)
    }
}

/// Parses a polynomial over declared variables within a monomial window.
pub fn parse_poly(text: &str, ctx: &MonomialCtx, names: &[String]) -> Result<Poly> {
    let toks = tokenize(text)?;
    let vars: BTreeMap<String, usize> =
        names.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
    let mut parser = Parser { toks: &toks, pos: 0 };
    let p = parser.poly(ctx, &vars)?;
    if parser.pos != toks.len() {
        bail!("trailing tokens in polynomial `{text}`");
    }
    Ok(p)
}

/// Parses a single monomial (coefficient 1) and returns its index.
pub fn parse_monomial(text: &str, ctx: &MonomialCtx, names: &[String]) -> Result<usize> {
    let p = parse_poly(text, ctx, names)?;
    let nonzero: Vec<usize> = p
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !scalar::is_zero(c))
        .map(|(i, _)| i)
        .collect();
    match nonzero.as_slice() {
        [idx] if p.coeffs[*idx] == scalar::one() => Ok(*idx),
        _ => bail!("`{text}` is not a plain monomial"),
    }
}

/// Parses a base specification `k[vars]/(polys) @ order`.
pub fn parse_base(text: &str) -> Result<ParsedBase> {
    let toks = tokenize(text)?;
    let mut parser = Parser { toks: &toks, pos: 0 };
    match parser.next() {
        Some(Tok::Ident(k)) if k == "k" => {}
        other => bail!("base specification must start with `k`, found {other:?}"),
    }
    let mut names: Vec<String> = Vec::new();
    if parser.peek() == Some(&Tok::LBracket) {
        parser.next();
        loop {
            match parser.next() {
                Some(Tok::Ident(name)) => {
                    if names.contains(name) {
                        bail!("duplicate variable `{name}`");
                    }
                    names.push(name.clone());
                }
                Some(Tok::RBracket) if names.is_empty() => break,
                other => bail!("expected a variable name, found {other:?}"),
            }
            match parser.next() {
                Some(Tok::Comma) => continue,
                Some(Tok::RBracket) => break,
                other => bail!("expected `,` or `]`, found {other:?}"),
            }
        }
    }
    // optional /(...) with raw generator text collected per comma at depth 0
    let mut gen_texts: Vec<String> = Vec::new();
    if parser.peek() == Some(&Tok::Slash) {
        parser.next();
        parser.expect(&Tok::LParen)?;
        let mut depth = 0usize;
        let mut current: Vec<Tok> = Vec::new();
        loop {
            match parser.next() {
                None => bail!("unterminated ideal generator list"),
                Some(Tok::LParen) => {
                    depth += 1;
                    current.push(Tok::LParen);
                }
                Some(Tok::RParen) => {
                    if depth == 0 {
                        if !current.is_empty() {
                            gen_texts.push(render(&current));
                        }
                        break;
                    }
                    depth -= 1;
                    current.push(Tok::RParen);
                }
                Some(Tok::Comma) if depth == 0 => {
                    gen_texts.push(render(&current));
                    current.clear();
                }
                Some(t) => current.push(t.clone()),
            }
        }
    }
    let mut order: Option<usize> = None;
    if parser.peek() == Some(&Tok::At) {
        parser.next();
        match parser.next() {
            Some(Tok::Num(n)) => order = Some(n.parse().context("order")?),
            other => bail!("expected a truncation order, found {other:?}"),
        }
    }
    if parser.pos != toks.len() {
        bail!("trailing tokens in base specification");
    }

    let n = names.len();
    // first pass to find generator degrees for the default order
    let order = match order {
        Some(o) => o,
        None => {
            if gen_texts.is_empty() {
                if n == 0 {
                    0
                } else {
                    bail!("a base with no relations needs an explicit `@ order`");
                }
            } else {
                let probe = MonomialCtx::new(n, 24);
                let mut top = 0usize;
                for g in &gen_texts {
                    let p = parse_poly(g, &probe, &names)?;
                    top = top.max(p.top_degree(&probe).unwrap_or(0));
                }
                top
            }
        }
    };
    let ctx = MonomialCtx::new(n, order);
    let gens: Vec<Poly> = gen_texts
        .iter()
        .map(|g| parse_poly(g, &ctx, &names))
        .collect::<Result<_>>()?;
    let truncation = LocalTruncation::new(n, order, gens)
        .map_err(|e| anyhow!("invalid base: {e}"))?;
    Ok(ParsedBase { truncation, names })
}

fn render(toks: &[Tok]) -> String {
    let mut out = String::new();
    for t in toks {
        match t {
            Tok::Ident(s) => out.push_str(s),
            Tok::Num(s) => out.push_str(s),
            Tok::Plus => out.push('+'),
            Tok::Minus => out.push('-'),
            Tok::Star => out.push('*'),
            Tok::Caret => out.push('^'),
            Tok::Slash => out.push('/'),
            Tok::Comma => out.push(','),
            Tok::LParen => out.push('('),
            Tok::RParen => out.push(')'),
            Tok::LBracket => out.push('['),
            Tok::RBracket => out.push(']'),
            Tok::At => out.push('@'),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_field() {
        let base = parse_base("k").unwrap();
        assert_eq!(base.truncation.dim(), 1);
    }

    #[test]
    fn parses_principal_quotients() {
        let base = parse_base("k[x]/(x^3)").unwrap();
        assert_eq!(base.truncation.dim(), 3); // 1, x, x^2
        let base = parse_base("k[x] @ 2").unwrap();
        assert_eq!(base.truncation.dim(), 3);
        assert!(parse_base("k[x]").is_err());
    }

    #[test]
    fn parses_multivariate_ideals() {
        let base = parse_base("k[x,y]/(x^2 - y^2, x*y) @ 3").unwrap();
        assert_eq!(base.names, vec!["x".to_string(), "y".to_string()]);
        // basis: 1, x, y, x^2 (= y^2), y^3? x*y = 0, x^2 = y^2,
        // x^3 = x*y^2 = (xy)y = 0... count via the tool
        assert!(base.truncation.dim() >= 4);
    }

    #[test]
    fn parses_rational_coefficients() {
        let base = parse_base("k[t] @ 4").unwrap();
        let p = parse_poly("1/2*t^2 - t + 3", base.truncation.ctx(), &base.names).unwrap();
        let names = &base.names;
        assert_eq!(p.to_string(base.truncation.ctx(), names), "3-t+1/2*t^2");
    }

    #[test]
    fn monomial_keys() {
        let base = parse_base("k[t] @ 3").unwrap();
        let idx = parse_monomial("t^2", base.truncation.ctx(), &base.names).unwrap();
        assert_eq!(base.truncation.ctx().degree(idx), 2);
        assert!(parse_monomial("2*t", base.truncation.ctx(), &base.names).is_err());
    }
}
