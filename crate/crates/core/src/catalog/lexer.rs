use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Tok {
    Ident(String),
    Int(String),
    Str(String),
    /// `x_{i,j}^k` or `c_{i,j}^k` (1-based).
    Coeff(usize, usize, usize),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Colon,
    Eq,
    Ne,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Tilde,
    Arrow,
    NotArrow,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(s) => write!(f, "`{s}`"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Coeff(i, j, k) => write!(f, "`x_{{{i},{j}}}^{k}`"),
            Tok::Eof => write!(f, "end of input"),
            other => write!(f, "`{}`", punct(other)),
        }
    }
}

pub fn punct(t: &Tok) -> &'static str {
    match t {
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::LBrace => "{",
        Tok::RBrace => "}",
        Tok::Comma => ",",
        Tok::Semi => ";",
        Tok::Colon => ":",
        Tok::Eq => "=",
        Tok::Ne => "!=",
        Tok::Plus => "+",
        Tok::Minus => "-",
        Tok::Star => "*",
        Tok::Slash => "/",
        Tok::Caret => "^",
        Tok::Tilde => "~",
        Tok::Arrow => "->",
        Tok::NotArrow => "!->",
        _ => "?",
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug)]
pub struct Spanned {
    pub tok: Tok,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: {message}")]
pub struct LexError {
    pub pos: Pos,
    pub message: String,
}

pub fn lex(src: &str) -> Result<Vec<Spanned>, LexError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                bump!();
            }
            out.push(Spanned { tok: Tok::Int(s), pos });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                // `x_{` starts a structure-constant token.
                if chars[i] == '_' && chars.get(i + 1) == Some(&'{') && (s == "x" || s == "c") {
                    break;
                }
                s.push(chars[i]);
                bump!();
            }
            if (s == "x" || s == "c") && chars.get(i) == Some(&'_') && chars.get(i + 1) == Some(&'{') {
                bump!();
                bump!();
                let mut body = String::new();
                while i < chars.len() && chars[i] != '}' {
                    body.push(chars[i]);
                    bump!();
                }
                if i == chars.len() {
                    return Err(LexError { pos, message: "unterminated structure-constant subscript".into() });
                }
                bump!();
                let err = || LexError { pos, message: format!("malformed structure constant `{s}_{{{body}}}`") };
                let parts: Vec<&str> = body.split(',').map(str::trim).collect();
                if parts.len() != 2 || chars.get(i) != Some(&'^') {
                    return Err(err());
                }
                bump!();
                let mut k = String::new();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    k.push(chars[i]);
                    bump!();
                }
                let a: usize = parts[0].parse().map_err(|_| err())?;
                let b: usize = parts[1].parse().map_err(|_| err())?;
                let k: usize = k.parse().map_err(|_| err())?;
                out.push(Spanned { tok: Tok::Coeff(a, b, k), pos });
                continue;
            }
            out.push(Spanned { tok: Tok::Ident(s), pos });
            continue;
        }
        if c == '"' {
            bump!();
            let mut s = String::new();
            while i < chars.len() && chars[i] != '"' {
                s.push(chars[i]);
                bump!();
            }
            if i == chars.len() {
                return Err(LexError { pos, message: "unterminated string".into() });
            }
            bump!();
            out.push(Spanned { tok: Tok::Str(s), pos });
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, len) = match (c, next) {
            ('-', Some('>')) => (Tok::Arrow, 2),
            ('!', Some('-')) if chars.get(i + 2) == Some(&'>') => (Tok::NotArrow, 3),
            ('!', Some('=')) => (Tok::Ne, 2),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            (',', _) => (Tok::Comma, 1),
            (';', _) => (Tok::Semi, 1),
            (':', _) => (Tok::Colon, 1),
            ('=', _) => (Tok::Eq, 1),
            ('+', _) => (Tok::Plus, 1),
            ('-', _) => (Tok::Minus, 1),
            ('*', _) => (Tok::Star, 1),
            ('/', _) => (Tok::Slash, 1),
            ('^', _) => (Tok::Caret, 1),
            ('~', _) => (Tok::Tilde, 1),
            _ => return Err(LexError { pos, message: format!("unexpected character `{c}`") }),
        };
        for _ in 0..len {
            bump!();
        }
        out.push(Spanned { tok, pos });
    }
    out.push(Spanned { tok: Tok::Eof, pos: Pos { line, col } });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_positions() {
        let toks = lex("N9(alpha) !-> N2C\n  x_{1,2}^4 - 2t # c\n").unwrap();
        let kinds: Vec<Tok> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(
            kinds,
            vec![
                Tok::Ident("N9".into()),
                Tok::LParen,
                Tok::Ident("alpha".into()),
                Tok::RParen,
                Tok::NotArrow,
                Tok::Ident("N2C".into()),
                Tok::Coeff(1, 2, 4),
                Tok::Minus,
                Tok::Int("2".into()),
                Tok::Ident("t".into()),
                Tok::Eof
            ]
        );
        assert_eq!(toks[6].pos, Pos { line: 2, col: 3 });
    }
}
