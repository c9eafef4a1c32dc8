//! Recursive-descent parser for map expressions, and the inverse renderer.
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor (('*'|'/') factor)*
//! factor   := '-' factor | base ('^' uint)?
//! base     := 'z' | rational | '(' expr ')'
//! rational := int ('/' uint)?
//! ```
//!
//! A numeric literal swallows a following `/uint`, so `2/3^2` is `(2/3)^2`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{degree_cap, Poly, RatMap};
use crate::error::{Error, Result};
use crate::exactnum::Rational;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Z,
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Z => "'z'".into(),
            Tok::Int(n) => format!("number {n}"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            'z' => Tok::Z,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((Tok::Int(s.parse().unwrap()), start));
                continue;
            }
            other => {
                return Err(Error::Parse {
                    position: i,
                    expected: "'z', a number, an operator or a parenthesis".into(),
                    found: format!("{other:?}"),
                })
            }
        };
        out.push((tok, i));
        i += 1;
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

/// Unnormalized quotient used while parsing.
#[derive(Clone)]
struct Frac {
    num: Poly,
    den: Poly,
}

impl Frac {
    fn poly(p: Poly) -> Frac {
        Frac { num: p, den: Poly::one() }
    }

    fn degree(&self) -> usize {
        self.num.deg0().max(self.den.deg0())
    }

    fn reduce(self) -> Frac {
        if self.num.is_zero() {
            return Frac::poly(Poly::zero());
        }
        let g = self.num.gcd(&self.den);
        if g.deg0() == 0 {
            return self;
        }
        Frac {
            num: self.num.div_exact(&g).unwrap(),
            den: self.den.div_exact(&g).unwrap(),
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    cap: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Parse {
            position: self.offset(),
            expected: expected.into(),
            found: self.peek().describe(),
        })
    }

    fn check_cap(&self, f: &Frac) -> Result<()> {
        if f.degree() > self.cap {
            Err(Error::DegreeCap {
                degree: f.degree(),
                cap: self.cap,
            })
        } else {
            Ok(())
        }
    }

    fn expr(&mut self) -> Result<Frac> {
        let mut acc = self.term()?;
        loop {
            let neg = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => return Ok(acc),
            };
            self.bump();
            let t = self.term()?;
            let rhs = if neg { -&t.num } else { t.num };
            acc = Frac {
                num: &(&acc.num * &t.den) + &(&rhs * &acc.den),
                den: &acc.den * &t.den,
            }
            .reduce();
        }
    }

    fn term(&mut self) -> Result<Frac> {
        let mut acc = self.factor()?;
        loop {
            let div = match self.peek() {
                Tok::Star => false,
                Tok::Slash => true,
                _ => return Ok(acc),
            };
            let (_, at) = self.bump();
            let f = self.factor()?;
            acc = if div {
                if f.num.is_zero() {
                    return Err(Error::DivisionByZero { position: at });
                }
                Frac {
                    num: &acc.num * &f.den,
                    den: &acc.den * &f.num,
                }
            } else {
                Frac {
                    num: &acc.num * &f.num,
                    den: &acc.den * &f.den,
                }
            }
            .reduce();
            self.check_cap(&acc)?;
        }
    }

    fn factor(&mut self) -> Result<Frac> {
        if *self.peek() == Tok::Minus {
            self.bump();
            let f = self.factor()?;
            return Ok(Frac { num: -&f.num, den: f.den });
        }
        let b = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(b);
        }
        self.bump();
        let Tok::Int(e) = self.peek().clone() else {
            return self.fail("an unsigned integer exponent");
        };
        self.bump();
        let e = e.to_usize().filter(|&e| e <= self.cap).ok_or(Error::DegreeCap {
            degree: usize::MAX,
            cap: self.cap,
        })?;
        if e.saturating_mul(b.degree()) > self.cap {
            return Err(Error::DegreeCap {
                degree: e.saturating_mul(b.degree()),
                cap: self.cap,
            });
        }
        Ok(Frac {
            num: b.num.pow(e),
            den: b.den.pow(e),
        })
    }

    fn base(&mut self) -> Result<Frac> {
        match self.peek().clone() {
            Tok::Z => {
                self.bump();
                Ok(Frac::poly(Poly::x()))
            }
            Tok::Int(n) => {
                self.bump();
                if *self.peek() == Tok::Slash {
                    if let Tok::Int(d) = &self.toks[self.pos + 1].0 {
                        let d = d.clone();
                        let (_, at) = self.bump();
                        self.bump();
                        if d.is_zero() {
                            return Err(Error::DivisionByZero { position: at });
                        }
                        return Ok(Frac::poly(Poly::constant(Rational::new(n, d))));
                    }
                }
                Ok(Frac::poly(Poly::constant(Rational::from_integer(n))))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.fail("')'");
                }
                self.bump();
                Ok(e)
            }
            _ => self.fail("'z', a number or '('"),
        }
    }
}

/// Parses any rational function expression, including constants.
pub fn parse_ratfunc(text: &str) -> Result<RatMap> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        cap: degree_cap(),
    };
    let f = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail("an operator or end of input");
    }
    RatMap::new(f.num, f.den)
}

/// Parses a map for dynamics; maps that cancel down to a constant are rejected.
pub fn parse_map(text: &str) -> Result<RatMap> {
    let f = parse_ratfunc(text)?;
    f.require_degree(1)?;
    Ok(f)
}

/// Parses a polynomial expression.
pub fn parse_poly(text: &str) -> Result<Poly> {
    let f = parse_ratfunc(text)?;
    if !f.is_polynomial() {
        return Err(Error::Invalid(format!("{text:?} is not a polynomial")));
    }
    Ok(f.num().scale(&f.den().lc().recip()))
}

fn render_coeff_term(c: &Rational, k: usize, var: &str) -> String {
    let mono = match k {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{k}"),
    };
    if k == 0 {
        c.to_string()
    } else if c.is_one() {
        mono
    } else {
        format!("{c}*{mono}")
    }
}

pub fn render_poly(f: &Poly, var: &str) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, c) in f.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let body = render_coeff_term(&c.abs(), k, var);
        if s.is_empty() {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(if c.is_negative() { " - " } else { " + " });
        }
        s.push_str(&body);
    }
    s
}

/// Text that [`parse_ratfunc`] maps back to the same normalized map.
pub fn render(f: &RatMap) -> String {
    if f.is_polynomial() {
        render_poly(f.num(), "z")
    } else {
        format!("({})/({})", render_poly(f.num(), "z"), render_poly(f.den(), "z"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    #[test]
    fn basic_parse() {
        let f = parse_map("z^2 - 1").unwrap();
        assert_eq!(f.num(), &Poly::from_ints(&[-1, 0, 1]));
        assert_eq!(f.den(), &Poly::one());
        let phi = parse_map("-45*(3*z+5)/(z^2*(z-9))").unwrap();
        assert_eq!(phi.num(), &Poly::from_ints(&[-225, -135]));
        assert_eq!(phi.den(), &Poly::from_ints(&[0, 0, -9, 1]));
        assert_eq!(phi.degree(), 3);
    }

    #[test]
    fn cancellation_to_constant_is_rejected() {
        let e = parse_map("(z^2 + z)/(z^2 + z)").unwrap_err();
        assert_eq!(e, Error::DegenerateMap { degree: 0 });
        assert_eq!(parse_ratfunc("(z^2 + z)/(z^2 + z)").unwrap().degree(), 0);
    }

    #[test]
    fn literal_rationals_bind_tightly() {
        assert_eq!(parse_poly("2/3^2").unwrap(), Poly::constant(rat(4, 9)));
        assert_eq!(parse_poly("z^2/3").unwrap(), Poly::new(vec![int(0), int(0), rat(1, 3)]));
        assert_eq!(parse_poly("-z^2").unwrap(), Poly::from_ints(&[0, 0, -1]));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_map("z^2 + * 3").unwrap_err() {
            Error::Parse { position, .. } => assert_eq!(position, 6),
            e => panic!("{e:?}"),
        }
        match parse_map("3z").unwrap_err() {
            Error::Parse { position, .. } => assert_eq!(position, 1),
            e => panic!("{e:?}"),
        }
        assert_eq!(
            parse_map("z/(z-z)").unwrap_err(),
            Error::DivisionByZero { position: 1 }
        );
        assert_eq!(parse_map("z+1/0").unwrap_err(), Error::DivisionByZero { position: 3 });
        assert!(matches!(parse_map("(z+1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_map("z^99999"), Err(Error::DegreeCap { .. })));
    }

    #[test]
    fn render_round_trip() {
        for s in ["z^2 - 3/4", "-45*(3*z+5)/(z^2*(z-9))", "(z^2+z)/(-2*z+1)", "-z^3/7 + z"] {
            let f = parse_map(s).unwrap();
            assert_eq!(parse_map(&render(&f)).unwrap(), f, "{s} -> {}", render(&f));
        }
        assert_eq!(render(&parse_map("z^2-3/4").unwrap()), "z^2 - 3/4");
    }
}
