use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::lexer::{lex, Pos, Spanned, Tok};
use super::model::*;
use crate::arith::GaussRat;
use crate::expr::{Expr, ExprError};
use crate::invariants::Invariant;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{pos}: {message}")]
    Lex { pos: Pos, message: String },
    #[error("{pos}: unexpected {found}; expected {}", .expected.join(" or "))]
    Syntax { pos: Pos, found: String, expected: Vec<String> },
    #[error("{pos}: unknown basis symbol `{symbol}`")]
    UnknownBasis { pos: Pos, symbol: String },
    #[error("{pos}: dimension mismatch: {message}")]
    DimensionMismatch { pos: Pos, message: String },
    #[error("{pos}: duplicate definition of {what}")]
    Duplicate { pos: Pos, what: String },
    #[error("{pos}: unknown algebra `{name}`")]
    UnknownAlgebra { pos: Pos, name: String },
    #[error("{pos}: unbound parameter `{name}`")]
    UnboundParameter { pos: Pos, name: String },
    #[error("{pos}: {message}")]
    Invalid { pos: Pos, message: String },
}

impl ParseError {
    pub fn pos(&self) -> Pos {
        match self {
            Self::Lex { pos, .. }
            | Self::Syntax { pos, .. }
            | Self::UnknownBasis { pos, .. }
            | Self::DimensionMismatch { pos, .. }
            | Self::Duplicate { pos, .. }
            | Self::UnknownAlgebra { pos, .. }
            | Self::UnboundParameter { pos, .. }
            | Self::Invalid { pos, .. } => *pos,
        }
    }
}

/// Shape of an algebra that references may point to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub dim: usize,
    pub params: usize,
}

/// Identifiers that never start a juxtaposed factor.
const STOP_WORDS: &[&str] = &["where", "via", "for", "in", "o"];

fn basis_index(s: &str, prefix: char) -> Option<usize> {
    let rest = s.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) || rest.starts_with('0') {
        return None;
    }
    rest.parse().ok()
}

fn s_index(s: &str) -> Option<usize> {
    if s == "A" {
        return Some(1);
    }
    basis_index(s, 'S')
}

fn coeff_index(s: &str) -> Option<(usize, usize, usize)> {
    let body = s.strip_prefix("x_{")?;
    let (ij, k) = body.split_once("}^")?;
    let (i, j) = ij.split_once(',')?;
    Some((i.parse().ok()?, j.parse().ok()?, k.parse().ok()?))
}

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
    known: HashMap<String, Signature>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].tok.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> PResult<T> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            found: self.peek().to_string(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.fail(&[&t.to_string()])
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            self.fail(&[&format!("`{kw}`")])
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail(&[what]),
        }
    }

    fn uint(&mut self, what: &str) -> PResult<usize> {
        match self.peek().clone() {
            Tok::Int(s) => {
                let pos = self.pos();
                self.bump();
                s.parse().map_err(|_| ParseError::Invalid { pos, message: format!("integer `{s}` too large") })
            }
            _ => self.fail(&[what]),
        }
    }

    /// Separator between statements: `;` or end of the enclosing block.
    fn end_stmt(&mut self) -> PResult<()> {
        if self.eat(&Tok::Semi) || matches!(self.peek(), Tok::RBrace | Tok::Eof) {
            Ok(())
        } else {
            self.fail(&["`;`", "`}`"])
        }
    }

    fn expr_err(&self, pos: Pos, e: ExprError) -> ParseError {
        ParseError::Invalid { pos, message: e.to_string() }
    }

    // ---- expressions ----

    fn expr(&mut self) -> PResult<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = Expr::add(acc, self.term()?);
            } else if self.eat(&Tok::Minus) {
                acc = Expr::sub(acc, self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Int(_) | Tok::Coeff(..) | Tok::LParen => true,
            Tok::Ident(s) => !STOP_WORDS.contains(&s.as_str()),
            _ => false,
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut acc = self.unary()?;
        loop {
            let pos = self.pos();
            if self.eat(&Tok::Star) {
                acc = Expr::mul(acc, self.unary()?);
            } else if self.eat(&Tok::Slash) {
                let d = self.unary()?;
                acc = Expr::div(acc, d).map_err(|e| self.expr_err(pos, e))?;
            } else if self.starts_atom() {
                acc = Expr::mul(acc, self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.eat(&Tok::Minus) {
            Ok(Expr::neg(self.unary()?))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> PResult<Expr> {
        let base = self.atom()?;
        let pos = self.pos();
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let paren = self.eat(&Tok::LParen);
        let neg = self.eat(&Tok::Minus);
        let e = self.uint("integer exponent")?;
        if paren {
            self.expect(Tok::RParen)?;
        }
        let e = i32::try_from(e).map_err(|_| ParseError::Invalid { pos, message: "exponent too large".into() })?;
        Expr::pow(base, if neg { -e } else { e }).map_err(|err| self.expr_err(pos, err))
    }

    fn atom(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Int(s) => {
                self.bump();
                let n: BigInt = s.parse().expect("lexer yields digits");
                Ok(Expr::num(GaussRat::new(BigRational::from_integer(n), BigRational::zero())))
            }
            Tok::Ident(s) if s == "i" => {
                self.bump();
                Ok(Expr::num(GaussRat::i()))
            }
            Tok::Ident(s) if !STOP_WORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(Expr::sym(s))
            }
            Tok::Coeff(i, j, k) => {
                self.bump();
                Ok(Expr::sym(Expr::coeff_name(i, j, k)))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => self.fail(&["number", "symbol", "`(`"]),
        }
    }

    /// Coefficients of a linear combination of `e1..en`; other symbols must be in `allowed`.
    fn linear(&mut self, n: usize, allowed: &BTreeSet<String>) -> PResult<Vec<Expr>> {
        let pos = self.pos();
        let e = self.expr()?;
        for s in e.symbols() {
            match basis_index(&s, 'e') {
                Some(k) if k <= n => {}
                Some(_) => return Err(ParseError::UnknownBasis { pos, symbol: s }),
                None if allowed.contains(&s) => {}
                None => return Err(ParseError::UnboundParameter { pos, name: s }),
            }
        }
        if e.is_zero() {
            return Ok(vec![Expr::int(0); n]);
        }
        e.split_linear(n, &|s| basis_index(s, 'e').map(|k| k - 1)).map_err(|err| match err {
            ExprError::Affine => ParseError::Invalid { pos, message: "expected a linear combination of basis vectors".into() },
            other => self.expr_err(pos, other),
        })
    }

    // ---- references ----

    fn node_ref(&mut self) -> PResult<(NodeRef, Pos)> {
        let pos = self.pos();
        let name = self.ident("algebra name")?;
        let sig = self.known.get(&name).cloned().ok_or(ParseError::UnknownAlgebra { pos, name: name.clone() })?;
        let binding = if self.eat(&Tok::LParen) {
            let b = self.binding()?;
            self.expect(Tok::RParen)?;
            b
        } else {
            Binding::None
        };
        match (&binding, sig.params) {
            (Binding::None, 0) => {}
            (Binding::None, _) => {
                return Err(ParseError::Invalid { pos, message: format!("family `{name}` needs a parameter binding") })
            }
            (_, 0) => return Err(ParseError::Invalid { pos, message: format!("`{name}` has no parameters") }),
            _ => {}
        }
        Ok((NodeRef { name, binding }, pos))
    }

    fn binding(&mut self) -> PResult<Binding> {
        if self.eat(&Tok::Star) {
            return Ok(Binding::Family);
        }
        if let Tok::Ident(s) = self.peek().clone() {
            let symbolic = matches!(self.peek2(), Tok::RParen | Tok::Ne) || matches!(self.peek2(), Tok::Ident(w) if w == "where");
            if symbolic && s != "i" && s != "t" {
                self.bump();
                let mut excluded = Vec::new();
                let mut nonzero = None;
                if self.eat(&Tok::Ne) {
                    excluded.push(self.expr()?);
                    while self.eat(&Tok::Comma) {
                        excluded.push(self.expr()?);
                    }
                }
                if self.eat_kw("where") {
                    nonzero = Some(self.expr()?);
                    self.expect(Tok::Ne)?;
                    let pos = self.pos();
                    if !self.expr()?.is_zero() {
                        return Err(ParseError::Invalid { pos, message: "only `<expr> != 0` conditions are supported".into() });
                    }
                }
                return Ok(Binding::Symbol { sym: s, excluded, nonzero });
            }
        }
        Ok(Binding::Value(self.expr()?))
    }

    // ---- items ----

    fn document(&mut self) -> PResult<Document> {
        let mut doc = Document::default();
        loop {
            while self.eat(&Tok::Semi) {}
            if matches!(self.peek(), Tok::Eof) {
                return Ok(doc);
            }
            let item = if self.is_kw("algebra") {
                Item::Algebra(self.algebra()?)
            } else if self.is_kw("witness") {
                Item::Witness(self.witness()?)
            } else if self.is_kw("certificate") {
                Item::Certificate(self.certificate()?)
            } else if self.is_kw("claim") {
                Item::Claim(self.claim()?)
            } else {
                return self.fail(&["`algebra`", "`witness`", "`certificate`", "`claim`"]);
            };
            doc.items.push(item);
        }
    }

    fn algebra(&mut self) -> PResult<AlgebraDef> {
        self.expect_kw("algebra")?;
        let pos = self.pos();
        let name = self.ident("algebra name")?;
        if self.known.contains_key(&name) {
            return Err(ParseError::Duplicate { pos, what: format!("algebra `{name}`") });
        }
        let mut params = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                let ppos = self.pos();
                let p = self.ident("parameter name")?;
                if p == "i" || p == "t" || basis_index(&p, 'e').is_some() || params.contains(&p) {
                    return Err(ParseError::Invalid { pos: ppos, message: format!("invalid parameter name `{p}`") });
                }
                params.push(p);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::RParen)?;
        }
        self.expect(Tok::LBrace)?;
        self.expect_kw("dim")?;
        let dpos = self.pos();
        let dim = self.uint("dimension")?;
        if dim == 0 {
            return Err(ParseError::DimensionMismatch { pos: dpos, message: "dimension must be positive".into() });
        }
        self.end_stmt()?;
        let allowed: BTreeSet<String> = params.iter().cloned().collect();
        let mut def = AlgebraDef { name: name.clone(), params, dim, products: vec![], tags: vec![], der: vec![], identify: vec![], aka: None };
        while !self.eat(&Tok::RBrace) {
            let spos = self.pos();
            if self.eat_kw("tags") {
                loop {
                    let tpos = self.pos();
                    let t = self.ident("variety tag")?;
                    let v = Variety::from_name(&t).ok_or(ParseError::Invalid { pos: tpos, message: format!("unknown variety `{t}`") })?;
                    def.tags.push(v);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
            } else if self.eat_kw("der") {
                let at = if self.eat(&Tok::LParen) {
                    let ppos = self.pos();
                    let p = self.ident("parameter name")?;
                    if !def.params.contains(&p) {
                        return Err(ParseError::UnboundParameter { pos: ppos, name: p });
                    }
                    self.expect(Tok::Eq)?;
                    let vpos = self.pos();
                    let v = self.expr()?;
                    if v.constant_value().is_none() {
                        return Err(ParseError::Invalid { pos: vpos, message: "parameter value must be a constant".into() });
                    }
                    self.expect(Tok::RParen)?;
                    Some((p, v))
                } else {
                    None
                };
                let value = self.uint("derivation dimension")?;
                def.der.push(DerCase { at, value });
            } else if self.eat_kw("identify") {
                let ppos = self.pos();
                let p = self.ident("parameter name")?;
                if !def.params.contains(&p) {
                    return Err(ParseError::UnboundParameter { pos: ppos, name: p });
                }
                self.expect(Tok::Tilde)?;
                let epos = self.pos();
                let e = self.expr()?;
                if let Some(s) = e.symbols().into_iter().find(|s| !allowed.contains(s)) {
                    return Err(ParseError::UnboundParameter { pos: epos, name: s });
                }
                def.identify.push((p, e));
            } else if self.eat_kw("aka") {
                match self.bump() {
                    Tok::Str(s) => def.aka = Some(s),
                    _ => return Err(ParseError::Syntax { pos: spos, found: "token".into(), expected: vec!["string".into()] }),
                }
            } else if let Tok::Ident(lhs) = self.peek().clone() {
                let Some(i) = basis_index(&lhs, 'e') else {
                    return self.fail(&["product `ei*ej`", "`tags`", "`der`", "`identify`", "`aka`", "`}`"]);
                };
                self.bump();
                self.eat(&Tok::Star);
                let jpos = self.pos();
                let rhs = self.ident("basis vector")?;
                let j = basis_index(&rhs, 'e').ok_or(ParseError::UnknownBasis { pos: jpos, symbol: rhs.clone() })?;
                for (k, s, p) in [(i, &lhs, spos), (j, &rhs, jpos)] {
                    if k > dim {
                        return Err(ParseError::UnknownBasis { pos: p, symbol: s.clone() });
                    }
                }
                if def.products.iter().any(|(a, b, _)| (*a, *b) == (i - 1, j - 1)) {
                    return Err(ParseError::Duplicate { pos: spos, what: format!("product e{i}*e{j}") });
                }
                self.expect(Tok::Eq)?;
                let coeffs = self.linear(dim, &allowed)?;
                def.products.push((i - 1, j - 1, coeffs));
            } else {
                return self.fail(&["product `ei*ej`", "`tags`", "`der`", "`identify`", "`aka`", "`}`"]);
            }
            self.end_stmt()?;
        }
        self.known.insert(name, Signature { dim, params: def.params.len() });
        Ok(def)
    }

    fn witness(&mut self) -> PResult<WitnessDef> {
        self.expect_kw("witness")?;
        let (source, spos) = self.node_ref()?;
        self.expect(Tok::Arrow)?;
        let (target, tpos) = self.node_ref()?;
        let n = self.known[&source.name].dim;
        let m = self.known[&target.name].dim;
        if n != m {
            return Err(ParseError::DimensionMismatch { pos: tpos, message: format!("{} has dimension {n}, {} has {m}", source.name, target.name) });
        }
        if matches!(target.binding, Binding::Family) {
            return Err(ParseError::Invalid { pos: tpos, message: "a witness target cannot be `(*)`".into() });
        }
        self.expect(Tok::LBrace)?;
        let mut rows: Vec<Option<Vec<Expr>>> = vec![None; n];
        let mut pending: Vec<(Pos, Expr)> = Vec::new();
        let mut index = None;
        let mut relations = Vec::new();
        // Helper symbols are only known once the whole block is read, so
        // rows are parsed permissively and checked afterwards.
        while !self.eat(&Tok::RBrace) {
            let pos = self.pos();
            if self.eat_kw("index") {
                if self.eat_kw("eps") {
                    self.expect(Tok::LParen)?;
                    self.expect_kw("t")?;
                    self.expect(Tok::RParen)?;
                }
                self.expect(Tok::Eq)?;
                let epos = self.pos();
                let e = self.expr()?;
                pending.push((epos, e.clone()));
                index = Some(e);
            } else if self.eat_kw("where") {
                let lhs = self.expr()?;
                self.expect(Tok::Eq)?;
                let rhs = self.expr()?;
                relations.push((lhs, rhs));
            } else if let Tok::Ident(s) = self.peek().clone() {
                let Some(k) = basis_index(&s, 'E') else {
                    return self.fail(&["row `Ei = ...`", "`index`", "`where`", "`}`"]);
                };
                if k > n {
                    return Err(ParseError::DimensionMismatch { pos, message: format!("row {s} in dimension {n}") });
                }
                if rows[k - 1].is_some() {
                    return Err(ParseError::Duplicate { pos, what: format!("row {s}") });
                }
                self.bump();
                self.expect(Tok::Eq)?;
                let epos = self.pos();
                let e = self.expr()?;
                for s in e.symbols() {
                    if let Some(b) = basis_index(&s, 'e') {
                        if b > n {
                            return Err(ParseError::UnknownBasis { pos: epos, symbol: s });
                        }
                    }
                }
                let coeffs = if e.is_zero() {
                    vec![Expr::int(0); n]
                } else {
                    e.split_linear(n, &|s| basis_index(s, 'e').map(|k| k - 1))
                    .map_err(|err| ParseError::Invalid { pos: epos, message: format!("row {s}: {err}") })?
                };
                for c in &coeffs {
                    pending.push((epos, c.clone()));
                }
                rows[k - 1] = Some(coeffs);
            } else {
                return self.fail(&["row `Ei = ...`", "`index`", "`where`", "`}`"]);
            }
            self.end_stmt()?;
        }
        let mut allowed: BTreeSet<String> = ["t".to_string()].into();
        allowed.extend(source.bound_symbol().map(str::to_string));
        allowed.extend(target.bound_symbol().map(str::to_string));
        for (l, r) in &relations {
            allowed.extend(l.symbols());
            allowed.extend(r.symbols());
        }
        for b in [&source.binding, &target.binding] {
            match b {
                Binding::Value(e) => pending.push((spos, e.clone())),
                Binding::Symbol { excluded, nonzero, .. } => {
                    pending.extend(excluded.iter().map(|e| (spos, e.clone())));
                    pending.extend(nonzero.iter().map(|e| (spos, e.clone())));
                }
                _ => {}
            }
        }
        for (pos, e) in &pending {
            if let Some(s) = e.symbols().into_iter().find(|s| !allowed.contains(s)) {
                return Err(ParseError::UnboundParameter { pos: *pos, name: s });
            }
        }
        if matches!(source.binding, Binding::Family) != index.is_some() {
            return Err(ParseError::Invalid { pos: spos, message: "`index` is required exactly when the source is `(*)`".into() });
        }
        let missing = rows.iter().filter(|r| r.is_none()).count();
        if missing > 0 {
            return Err(ParseError::DimensionMismatch { pos: self.toks[self.at.saturating_sub(1)].pos, message: format!("{missing} of {n} rows undefined") });
        }
        Ok(WitnessDef { source, target, rows: rows.into_iter().map(Option::unwrap).collect(), index, relations })
    }

    fn targets(&mut self) -> PResult<Vec<NodeRef>> {
        let mut out = vec![self.node_ref()?.0];
        while self.eat(&Tok::Comma) {
            out.push(self.node_ref()?.0);
        }
        Ok(out)
    }

    fn s_space(&mut self) -> PResult<usize> {
        match self.peek().clone() {
            Tok::Ident(s) if s_index(&s).is_some() => {
                self.bump();
                Ok(s_index(&s).unwrap())
            }
            _ => self.fail(&["flag space `Sk`"]),
        }
    }

    fn flag(&mut self, n: usize) -> PResult<Flag> {
        let pos = self.pos();
        if let Tok::Ident(s) = self.peek().clone() {
            if let Some(j) = basis_index(&s, 'e') {
                self.bump();
                if j > n {
                    return Err(ParseError::UnknownBasis { pos, symbol: s });
                }
                self.expect_kw("in")?;
                self.expect_kw("Z")?;
                return Ok(Flag::InCenter(j));
            }
        }
        let mut terms = Vec::new();
        loop {
            let a = self.s_space()?;
            let t = if self.eat_kw("o") {
                FlagTerm::Circ(a, self.s_space()?)
            } else if self.eat(&Tok::Caret) {
                let epos = self.pos();
                if self.uint("`2`")? != 2 {
                    return Err(ParseError::Invalid { pos: epos, message: "only squares are supported".into() });
                }
                FlagTerm::Prod(a, a)
            } else {
                self.eat(&Tok::Star);
                FlagTerm::Prod(a, self.s_space()?)
            };
            terms.push(t);
            if !self.eat(&Tok::Plus) {
                break;
            }
        }
        let within = if self.eat_kw("in") {
            Some(self.s_space()?)
        } else {
            self.expect(Tok::Eq)?;
            let zpos = self.pos();
            if self.uint("`0`")? != 0 {
                return Err(ParseError::Invalid { pos: zpos, message: "expected `= 0`".into() });
            }
            None
        };
        for t in &terms {
            let (FlagTerm::Prod(a, b) | FlagTerm::Circ(a, b)) = *t;
            if a > n || b > n || within.is_some_and(|c| c > n) {
                return Err(ParseError::DimensionMismatch { pos, message: format!("flag spaces are S1..S{n}") });
            }
        }
        Ok(Flag::Within { terms, within })
    }

    fn certificate(&mut self) -> PResult<CertificateDef> {
        self.expect_kw("certificate")?;
        let name = self.ident("certificate name")?;
        self.expect_kw("for")?;
        let (source, _) = self.node_ref()?;
        self.expect(Tok::NotArrow)?;
        let targets = self.targets()?;
        let n = self.known[&source.name].dim;
        self.expect(Tok::LBrace)?;
        let mut def = CertificateDef { name, source, targets, flags: vec![], equations: vec![], basis: None };
        let mut allowed = BTreeSet::new();
        allowed.extend(def.source.bound_symbol().map(str::to_string));
        while !self.eat(&Tok::RBrace) {
            if self.eat_kw("flags") {
                self.expect(Tok::Colon)?;
                def.flags.push(self.flag(n)?);
                while self.eat(&Tok::Comma) {
                    def.flags.push(self.flag(n)?);
                }
            } else if self.eat_kw("equations") {
                self.expect(Tok::Colon)?;
                loop {
                    let pos = self.pos();
                    let lhs = self.expr()?;
                    let e = if self.eat(&Tok::Eq) { Expr::sub(lhs, self.expr()?) } else { lhs };
                    for s in e.symbols() {
                        match coeff_index(&s) {
                            Some((i, j, k)) if (1..=n).contains(&i) && (1..=n).contains(&j) && (1..=n).contains(&k) => {}
                            Some(_) => return Err(ParseError::UnknownBasis { pos, symbol: s }),
                            None if allowed.contains(&s) => {}
                            None => return Err(ParseError::UnboundParameter { pos, name: s }),
                        }
                    }
                    def.equations.push(e);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
            } else if self.eat_kw("basis") {
                self.expect_kw("g")?;
                self.expect(Tok::Colon)?;
                let mut rows: Vec<Vec<Expr>> =
                    (0..n).map(|i| (0..n).map(|j| Expr::int((i == j) as i64)).collect()).collect();
                let mut seen = BTreeSet::new();
                loop {
                    let pos = self.pos();
                    let s = self.ident("basis vector")?;
                    let i = basis_index(&s, 'e').filter(|&i| i <= n).ok_or(ParseError::UnknownBasis { pos, symbol: s.clone() })?;
                    if !seen.insert(i) {
                        return Err(ParseError::Duplicate { pos, what: format!("image of {s}") });
                    }
                    self.expect(Tok::Arrow)?;
                    rows[i - 1] = self.linear(n, &allowed)?;
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                def.basis = Some(rows);
            } else {
                return self.fail(&["`flags`", "`equations`", "`basis`", "`}`"]);
            }
            self.end_stmt()?;
        }
        Ok(def)
    }

    fn claim(&mut self) -> PResult<ClaimDef> {
        self.expect_kw("claim")?;
        let (source, pos) = self.node_ref()?;
        let degenerates = if self.eat(&Tok::Arrow) {
            true
        } else if self.eat(&Tok::NotArrow) {
            false
        } else {
            return self.fail(&["`->`", "`!->`"]);
        };
        let targets = self.targets()?;
        self.expect_kw("via")?;
        let proof = if self.eat_kw("witness") {
            let a = self.ident("witness source")?;
            self.expect(Tok::Arrow)?;
            let b = self.ident("witness target")?;
            ClaimProof::Witness(format!("{a}->{b}"))
        } else if self.eat_kw("certificate") {
            ClaimProof::Certificate(self.ident("certificate name")?)
        } else {
            self.eat_kw("criterion");
            let ipos = self.pos();
            let s = self.ident("invariant name")?;
            ClaimProof::Invariant(
                Invariant::from_name(&s).ok_or(ParseError::Invalid { pos: ipos, message: format!("unknown criterion `{s}`") })?,
            )
        };
        if degenerates != matches!(proof, ClaimProof::Witness(_)) {
            return Err(ParseError::Invalid { pos, message: "degenerations need a witness; non-degenerations a criterion or certificate".into() });
        }
        self.end_stmt()?;
        Ok(ClaimDef { source, targets, degenerates, proof })
    }
}

/// Parses a document; references may point to algebras defined earlier in
/// the text or listed in `known`.
pub fn parse_with(src: &str, known: &HashMap<String, Signature>) -> Result<Document, ParseError> {
    let toks = lex(src).map_err(|e| ParseError::Lex { pos: e.pos, message: e.message })?;
    let mut p = Parser { toks, at: 0, known: known.clone() };
    p.document()
}

/// Parses a self-contained document.
pub fn parse(src: &str) -> Result<Document, ParseError> {
    parse_with(src, &HashMap::new())
}
