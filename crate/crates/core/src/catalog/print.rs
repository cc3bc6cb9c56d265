//! Canonical serialization; `parse(print(d)) == d` for parsed documents.

use std::fmt::{self, Display, Formatter, Write};

use super::model::*;
use crate::expr::fmt_linear;

impl Display for Binding {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Binding::None => Ok(()),
            Binding::Family => f.write_str("(*)"),
            Binding::Value(e) => write!(f, "({e})"),
            Binding::Symbol { sym, excluded, nonzero } => {
                write!(f, "({sym}")?;
                if !excluded.is_empty() {
                    let xs: Vec<String> = excluded.iter().map(|e| e.to_string()).collect();
                    write!(f, " != {}", xs.join(", "))?;
                }
                if let Some(e) = nonzero {
                    write!(f, " where {e} != 0")?;
                }
                f.write_char(')')
            }
        }
    }
}

impl Display for NodeRef {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.name, self.binding)
    }
}

fn join<T: Display>(xs: &[T], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

impl Display for AlgebraDef {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "algebra {}", self.name)?;
        if !self.params.is_empty() {
            write!(f, "({})", self.params.join(", "))?;
        }
        writeln!(f, " {{")?;
        writeln!(f, "  dim {};", self.dim)?;
        for (i, j, c) in &self.products {
            writeln!(f, "  e{}*e{} = {};", i + 1, j + 1, fmt_linear(c))?;
        }
        if !self.tags.is_empty() {
            writeln!(f, "  tags {};", join(&self.tags, ", "))?;
        }
        for d in &self.der {
            match &d.at {
                None => writeln!(f, "  der {};", d.value)?,
                Some((p, v)) => writeln!(f, "  der({p} = {v}) {};", d.value)?,
            }
        }
        for (p, e) in &self.identify {
            writeln!(f, "  identify {p} ~ {e};")?;
        }
        if let Some(a) = &self.aka {
            writeln!(f, "  aka \"{a}\";")?;
        }
        f.write_str("}\n")
    }
}

impl Display for WitnessDef {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        writeln!(f, "witness {} -> {} {{", self.source, self.target)?;
        for (i, r) in self.rows.iter().enumerate() {
            writeln!(f, "  E{} = {};", i + 1, fmt_linear(r))?;
        }
        if let Some(e) = &self.index {
            writeln!(f, "  index eps(t) = {e};")?;
        }
        for (l, r) in &self.relations {
            writeln!(f, "  where {l} = {r};")?;
        }
        f.write_str("}\n")
    }
}

impl Display for FlagTerm {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            FlagTerm::Prod(a, b) => write!(f, "S{a} S{b}"),
            FlagTerm::Circ(a, b) => write!(f, "S{a} o S{b}"),
        }
    }
}

impl Display for Flag {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Flag::InCenter(j) => write!(f, "e{j} in Z"),
            Flag::Within { terms, within } => {
                f.write_str(&join(terms, " + "))?;
                match within {
                    Some(c) => write!(f, " in S{c}"),
                    None => f.write_str(" = 0"),
                }
            }
        }
    }
}

impl Display for CertificateDef {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        writeln!(f, "certificate {} for {} !-> {} {{", self.name, self.source, join(&self.targets, ", "))?;
        if !self.flags.is_empty() {
            writeln!(f, "  flags: {};", join(&self.flags, ", "))?;
        }
        if !self.equations.is_empty() {
            writeln!(f, "  equations: {};", join(&self.equations, ", "))?;
        }
        if let Some(rows) = &self.basis {
            let imgs: Vec<String> = rows.iter().enumerate().map(|(i, r)| format!("e{} -> {}", i + 1, fmt_linear(r))).collect();
            writeln!(f, "  basis g: {};", imgs.join(", "))?;
        }
        f.write_str("}\n")
    }
}

impl Display for ClaimProof {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            ClaimProof::Invariant(i) => write!(f, "criterion {i}"),
            ClaimProof::Certificate(c) => write!(f, "certificate {c}"),
            ClaimProof::Witness(w) => write!(f, "witness {w}"),
        }
    }
}

impl Display for ClaimDef {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let arrow = if self.degenerates { "->" } else { "!->" };
        writeln!(f, "claim {} {arrow} {} via {};", self.source, join(&self.targets, ", "), self.proof)
    }
}

impl Display for Item {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Item::Algebra(a) => a.fmt(f),
            Item::Witness(w) => w.fmt(f),
            Item::Certificate(c) => c.fmt(f),
            Item::Claim(c) => c.fmt(f),
        }
    }
}

impl Display for Document {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for (k, it) in self.items.iter().enumerate() {
            if k > 0 && !matches!((&self.items[k - 1], it), (Item::Claim(_), Item::Claim(_))) {
                f.write_char('\n')?;
            }
            it.fmt(f)?;
        }
        Ok(())
    }
}
