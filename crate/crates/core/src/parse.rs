//! Text front-end for formulas and sequents.
//!
//! K(A) syntax: `~ [] <>` bind tightest, then `&`, then `/\` and `\/` (left
//! associative, same level), then `->` (right associative). `0` is the
//! constant zero and `c` the K(A^c) constant. The K(Ł) dialect uses `!`, `=>`,
//! `(+)`, `(.)`, `/\`, `\/`, `[]` and `<>` at the analogous levels.

use crate::formula::{Dialect, Formula, LFormula, Sequent};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("dialect error at {pos}: {msg}")]
    Dialect { pos: usize, msg: String },
}

/// Result of [`parse`]: the tree type depends on the dialect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parsed {
    A(Formula),
    L(LFormula),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    LParen,
    RParen,
    Tilde,
    Bang,
    BoxOp,
    Dia,
    Amp,
    Wedge,
    Vee,
    Arrow,
    DArrow,
    Oplus,
    Otimes,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    const SYMBOLS: &[(&str, Tok)] = &[
        ("(+)", Tok::Oplus),
        ("(.)", Tok::Otimes),
        ("->", Tok::Arrow),
        ("=>", Tok::DArrow),
        ("/\\", Tok::Wedge),
        ("\\/", Tok::Vee),
        ("[]", Tok::BoxOp),
        ("<>", Tok::Dia),
        ("(", Tok::LParen),
        (")", Tok::RParen),
        ("~", Tok::Tilde),
        ("!", Tok::Bang),
        ("&", Tok::Amp),
        ("0", Tok::Zero),
    ];
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < bytes.len() {
        let ch = bytes[i];
        if ch.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if ch.is_ascii_lowercase() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
            continue;
        }
        for (sym, tok) in SYMBOLS {
            if text[i..].starts_with(sym) {
                out.push((i, tok.clone()));
                i += sym.len();
                continue 'outer;
            }
        }
        return Err(ParseError::Syntax { pos: i, msg: format!("unexpected character {:?}", text[i..].chars().next().unwrap()) });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    dialect: Dialect,
}

impl Parser {
    fn new(text: &str, dialect: Dialect) -> Result<Parser, ParseError> {
        if text.trim().is_empty() {
            return Err(ParseError::Empty);
        }
        Ok(Parser { toks: lex(text)?, pos: 0, end: text.len(), dialect })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => self.error(format!("unexpected {t:?}")),
        }
    }

    fn a_expr(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.a_lattice()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.bump();
            let rhs = self.a_expr()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn a_lattice(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.a_fuse()?;
        loop {
            match self.peek() {
                Some(Tok::Wedge) => {
                    self.bump();
                    acc = Formula::meet(acc, self.a_fuse()?);
                }
                Some(Tok::Vee) => {
                    self.bump();
                    acc = Formula::join(acc, self.a_fuse()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn a_fuse(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.a_unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.bump();
            acc = Formula::fuse(acc, self.a_unary()?);
        }
        Ok(acc)
    }

    fn a_unary(&mut self) -> Result<Formula, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Tilde) => Ok(Formula::neg(self.a_unary()?)),
            Some(Tok::BoxOp) => Ok(Formula::boxed(self.a_unary()?)),
            Some(Tok::Dia) => Ok(Formula::diamond(self.a_unary()?)),
            Some(Tok::Zero) => Ok(Formula::Zero),
            Some(Tok::Ident(name)) if name == "c" => {
                if self.dialect == Dialect::KAc {
                    Ok(Formula::ConstC)
                } else {
                    Err(ParseError::Dialect { pos: at, msg: "constant `c` is only available in kac".into() })
                }
            }
            Some(Tok::Ident(name)) => Ok(Formula::Var(name)),
            Some(Tok::LParen) => {
                let inner = self.a_expr()?;
                if self.bump() != Some(Tok::RParen) {
                    self.pos -= 1;
                    return self.error("expected `)`");
                }
                Ok(inner)
            }
            Some(t) => {
                self.pos -= 1;
                self.error(format!("unexpected {t:?}"))
            }
            None => self.error("unexpected end of input"),
        }
    }

    fn l_expr(&mut self) -> Result<LFormula, ParseError> {
        let lhs = self.l_lattice()?;
        if self.peek() == Some(&Tok::DArrow) {
            self.bump();
            let rhs = self.l_expr()?;
            return Ok(LFormula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn l_lattice(&mut self) -> Result<LFormula, ParseError> {
        let mut acc = self.l_monoid()?;
        loop {
            match self.peek() {
                Some(Tok::Wedge) => {
                    self.bump();
                    acc = LFormula::meet(acc, self.l_monoid()?);
                }
                Some(Tok::Vee) => {
                    self.bump();
                    acc = LFormula::join(acc, self.l_monoid()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn l_monoid(&mut self) -> Result<LFormula, ParseError> {
        let mut acc = self.l_unary()?;
        loop {
            match self.peek() {
                Some(Tok::Oplus) => {
                    self.bump();
                    acc = LFormula::oplus(acc, self.l_unary()?);
                }
                Some(Tok::Otimes) => {
                    self.bump();
                    acc = LFormula::otimes(acc, self.l_unary()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn l_unary(&mut self) -> Result<LFormula, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Bang) => Ok(LFormula::neg(self.l_unary()?)),
            Some(Tok::BoxOp) => Ok(LFormula::boxed(self.l_unary()?)),
            Some(Tok::Dia) => Ok(LFormula::diamond(self.l_unary()?)),
            Some(Tok::Ident(name)) if name == "c" => {
                Err(ParseError::Dialect { pos: at, msg: "`c` is reserved and not a kl variable".into() })
            }
            Some(Tok::Ident(name)) => Ok(LFormula::LVar(name)),
            Some(Tok::LParen) => {
                let inner = self.l_expr()?;
                if self.bump() != Some(Tok::RParen) {
                    self.pos -= 1;
                    return self.error("expected `)`");
                }
                Ok(inner)
            }
            Some(t @ (Tok::Tilde | Tok::Zero | Tok::Amp | Tok::Arrow)) => {
                Err(ParseError::Dialect { pos: at, msg: format!("{t:?} is not part of the kl syntax") })
            }
            Some(t) => {
                self.pos -= 1;
                self.error(format!("unexpected {t:?}"))
            }
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parse a K(A) or K(A^c) formula.
pub fn parse_formula(text: &str, dialect: Dialect) -> Result<Formula, ParseError> {
    if dialect == Dialect::KL {
        return Err(ParseError::Dialect { pos: 0, msg: "use parse_lformula for kl".into() });
    }
    let mut p = Parser::new(text, dialect)?;
    let f = p.a_expr()?;
    p.expect_end()?;
    Ok(f)
}

/// Parse a K(Ł) formula, expanding the derived connectives.
pub fn parse_lformula(text: &str) -> Result<LFormula, ParseError> {
    let mut p = Parser::new(text, Dialect::KL)?;
    let f = p.l_expr()?;
    p.expect_end()?;
    Ok(f)
}

pub fn parse(text: &str, dialect: Dialect) -> Result<Parsed, ParseError> {
    match dialect {
        Dialect::KL => parse_lformula(text).map(Parsed::L),
        _ => parse_formula(text, dialect).map(Parsed::A),
    }
}

/// Parse `f1, f2 |- g1, g2`; either side may be empty.
pub fn parse_sequent(text: &str, dialect: Dialect) -> Result<Sequent, ParseError> {
    let Some(turn) = text.find("|-") else {
        return Err(ParseError::Syntax { pos: text.len(), msg: "expected `|-`".into() });
    };
    if let Some(again) = text[turn + 2..].find("|-") {
        return Err(ParseError::Syntax { pos: turn + 2 + again, msg: "more than one `|-`".into() });
    }
    let side = |chunk: &str, base: usize| -> Result<Vec<Formula>, ParseError> {
        if chunk.trim().is_empty() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut offset = base;
        for piece in chunk.split(',') {
            let f = parse_formula(piece, dialect).map_err(|e| shift(e, offset))?;
            out.push(f);
            offset += piece.len() + 1;
        }
        Ok(out)
    };
    let ant = side(&text[..turn], 0)?;
    let suc = side(&text[turn + 2..], turn + 2)?;
    Ok(Sequent::new(ant, suc))
}

fn shift(e: ParseError, by: usize) -> ParseError {
    match e {
        ParseError::Syntax { pos, msg } => ParseError::Syntax { pos: pos + by, msg },
        ParseError::Dialect { pos, msg } => ParseError::Dialect { pos: pos + by, msg },
        ParseError::Empty => ParseError::Syntax { pos: by, msg: "empty formula in sequent".into() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ka(s: &str) -> Formula {
        parse_formula(s, Dialect::KA).unwrap()
    }

    fn p() -> Formula {
        Formula::var("p")
    }

    #[test]
    fn identity() {
        assert_eq!(ka("p -> p"), Formula::imp(p(), p()));
    }

    #[test]
    fn seriality_expands_diamond() {
        let expected = Formula::imp(
            Formula::boxed(p()),
            Formula::imp(Formula::boxed(Formula::imp(p(), Formula::Zero)), Formula::Zero),
        );
        assert_eq!(ka("[]p -> <>p"), expected);
    }

    #[test]
    fn negation_expands() {
        assert_eq!(ka("~q"), Formula::imp(Formula::var("q"), Formula::Zero));
    }

    #[test]
    fn precedence_and_associativity() {
        let (q, r) = (Formula::var("q"), Formula::var("r"));
        assert_eq!(ka("p -> q -> r"), Formula::imp(p(), Formula::imp(q.clone(), r.clone())));
        assert_eq!(ka("p & q \\/ r"), Formula::join(Formula::fuse(p(), q.clone()), r.clone()));
        assert_eq!(ka("p /\\ q \\/ r"), Formula::join(Formula::meet(p(), q.clone()), r.clone()));
        assert_eq!(ka("[]p & q"), Formula::fuse(Formula::boxed(p()), q));
    }

    #[test]
    fn constant_needs_kac() {
        assert!(matches!(parse_formula("c -> []c", Dialect::KA), Err(ParseError::Dialect { pos: 0, .. })));
        let f = parse_formula("c -> []c", Dialect::KAc).unwrap();
        assert_eq!(f, Formula::imp(Formula::ConstC, Formula::boxed(Formula::ConstC)));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_formula("", Dialect::KA), Err(ParseError::Empty));
        assert!(matches!(parse_formula("p ->", Dialect::KA), Err(ParseError::Syntax { pos: 4, .. })));
        assert!(matches!(parse_formula("(p", Dialect::KA), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_formula("p $ q", Dialect::KA), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_formula("p q", Dialect::KA), Err(ParseError::Syntax { pos: 2, .. })));
    }

    #[test]
    fn luk_connectives() {
        let (lp, lq) = (LFormula::var("p"), LFormula::var("q"));
        assert_eq!(parse_lformula("!p").unwrap(), LFormula::neg(lp.clone()));
        assert_eq!(parse_lformula("p (+) q").unwrap(), LFormula::imp(LFormula::neg(lp.clone()), lq.clone()));
        assert_eq!(parse_lformula("p \\/ q").unwrap(), LFormula::imp(LFormula::imp(lp.clone(), lq.clone()), lq.clone()));
        assert_eq!(parse_lformula("<>p").unwrap(), LFormula::neg(LFormula::boxed(LFormula::neg(lp.clone()))));
        assert_eq!(parse_lformula("p => q => p").unwrap(), LFormula::imp(lp.clone(), LFormula::imp(lq, lp)));
        assert!(matches!(parse_lformula("c"), Err(ParseError::Dialect { .. })));
        assert!(matches!(parse_lformula("~p"), Err(ParseError::Dialect { .. })));
    }

    #[test]
    fn sequents() {
        let s = parse_sequent("p, q |- q, p", Dialect::KA).unwrap();
        assert_eq!(s.ant.len(), 2);
        assert_eq!(s.suc.len(), 2);
        let s = parse_sequent("|- [](p & p) -> ([]p & []p)", Dialect::KA).unwrap();
        assert!(s.ant.is_empty());
        assert_eq!(s.suc.len(), 1);
        assert_eq!(parse_sequent("|-", Dialect::KA).unwrap(), Sequent::empty());
        assert!(parse_sequent("p |- q |- r", Dialect::KA).is_err());
        assert!(matches!(parse_sequent("p, |- q", Dialect::KA), Err(ParseError::Syntax { pos: 2, .. })));
    }

    #[test]
    fn printed_text_reparses() {
        for text in ["[]p -> <>p", "~(p & q) \\/ []0", "<>[](q -> p) -> ([]<>q -> <>[]p)", "p /\\ ~~p"] {
            let f = ka(text);
            assert_eq!(ka(&f.to_string()), f, "{text}");
        }
        let g = parse_lformula("[](p => q) => ([]p => []q)").unwrap();
        assert_eq!(parse_lformula(&g.to_string()).unwrap(), g);
    }
}
