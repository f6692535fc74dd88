//! Text inputs: the group-spec language, the Cayley table format, and a
//! fixed catalog of small groups used by the verification suites.
//!
//! ```text
//! extraspecial(p,m,type)   type: + - D8 Q8 (p = 2), p p2 (odd p)
//! dihedral(n) quaternion(n) semidihedral(n) modular(n) abelian(a,b,...)
//! heisenberg(p) F(n) D(n) P2(n) gammaQ(spec,n) quotientCenterDiag(spec,n)
//! product(spec,spec) perm <degree>: (1 2)(3 4), (1 3) table:<path>
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::group::{direct_product, Elem, FiniteGroup, DEFAULT_ORDER_CAP};
use crate::zoo::{self, ExtraspecialType};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Extraspecial {
        p: u32,
        m: u32,
        kind: ExtraspecialType,
    },
    Dihedral(u64),
    Quaternion(u64),
    Semidihedral(u64),
    Modular(u64),
    Abelian(Vec<u64>),
    Heisenberg(u32),
    SignedPermF(usize),
    /// diagonal subgroup of `F(n)`, as a standalone group
    DiagonalF(usize),
    SylowSym(usize),
    GammaQuotient(Box<GroupSpec>, u32),
    CenterDiagonalQuotient(Box<GroupSpec>, u32),
    Product(Box<GroupSpec>, Box<GroupSpec>),
    Permutations {
        degree: usize,
        gens: Vec<Vec<usize>>,
    },
    Table(String),
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<GroupSpec> {
        let mut p = Parser { src: text, pos: 0 };
        let spec = p.spec()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.err("trailing input"));
        }
        Ok(spec)
    }

    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Extraspecial { p, m, kind } => zoo::extraspecial(*p, *m, *kind),
            GroupSpec::Dihedral(n) => zoo::dihedral(*n),
            GroupSpec::Quaternion(n) => zoo::quaternion(*n),
            GroupSpec::Semidihedral(n) => zoo::semidihedral(*n),
            GroupSpec::Modular(n) => zoo::modular(*n),
            GroupSpec::Abelian(orders) => zoo::abelian(orders),
            GroupSpec::Heisenberg(p) => zoo::heisenberg(*p),
            GroupSpec::SignedPermF(n) => Ok(zoo::signed_perm_f(*n)?.group),
            GroupSpec::DiagonalF(n) => {
                let f = zoo::signed_perm_f(*n)?;
                Ok(f.group.promote(&f.diagonal_subgroup()).0)
            }
            GroupSpec::SylowSym(n) => zoo::sylow2_sym(*n),
            GroupSpec::GammaQuotient(base, n) => zoo::gamma_power_quotient(&base.build()?, *n),
            GroupSpec::CenterDiagonalQuotient(base, n) => zoo::center_diagonal_quotient(&base.build()?, *n),
            GroupSpec::Product(a, b) => direct_product(&a.build()?, &b.build()?),
            GroupSpec::Permutations { degree, gens } => FiniteGroup::from_permutations(*degree, gens, None),
            GroupSpec::Table(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
                parse_cayley_text(&text)
            }
        }
    }
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Extraspecial { p, m, kind } => {
                let t = match kind {
                    ExtraspecialType::Plus => "+",
                    ExtraspecialType::Minus => "-",
                    ExtraspecialType::ExponentP => "p",
                    ExtraspecialType::ExponentP2 => "p2",
                };
                write!(f, "extraspecial({p},{m},{t})")
            }
            GroupSpec::Dihedral(n) => write!(f, "dihedral({n})"),
            GroupSpec::Quaternion(n) => write!(f, "quaternion({n})"),
            GroupSpec::Semidihedral(n) => write!(f, "semidihedral({n})"),
            GroupSpec::Modular(n) => write!(f, "modular({n})"),
            GroupSpec::Abelian(o) => write!(f, "abelian({})", join(o)),
            GroupSpec::Heisenberg(p) => write!(f, "heisenberg({p})"),
            GroupSpec::SignedPermF(n) => write!(f, "F({n})"),
            GroupSpec::DiagonalF(n) => write!(f, "D({n})"),
            GroupSpec::SylowSym(n) => write!(f, "P2({n})"),
            GroupSpec::GammaQuotient(b, n) => write!(f, "gammaQ({b},{n})"),
            GroupSpec::CenterDiagonalQuotient(b, n) => write!(f, "quotientCenterDiag({b},{n})"),
            GroupSpec::Product(a, b) => write!(f, "product({a},{b})"),
            GroupSpec::Permutations { degree, gens } => {
                let cycles: Vec<String> = gens
                    .iter()
                    .map(|g| {
                        let perm: Vec<u16> = g.iter().map(|&x| x as u16).collect();
                        crate::group::cycle_notation(&perm)
                    })
                    .collect();
                write!(f, "perm {degree}: {}", cycles.join(", "))
            }
            GroupSpec::Table(path) => write!(f, "table:{path}"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn word(&mut self) -> Result<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..]
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.src.len() - start);
        if len == 0 {
            return Err(self.err("expected a name"));
        }
        self.pos += len;
        Ok((start, &self.src[start..start + len]))
    }

    fn number(&mut self) -> Result<(usize, u64)> {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..]
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.src.len() - start);
        if len == 0 {
            return Err(self.err("expected a number"));
        }
        self.pos += len;
        let n = self.src[start..self.pos]
            .parse()
            .map_err(|_| Error::ParameterOutOfRange {
                offset: start,
                message: "number too large".into(),
            })?;
        Ok((start, n))
    }

    fn small(&mut self, lo: u64, hi: u64) -> Result<u64> {
        let (at, n) = self.number()?;
        if n < lo || n > hi {
            return Err(Error::ParameterOutOfRange {
                offset: at,
                message: format!("{n} not in {lo}..={hi}"),
            });
        }
        Ok(n)
    }

    fn args_end(&mut self) -> Result<()> {
        self.expect(')')
    }

    fn spec(&mut self) -> Result<GroupSpec> {
        self.skip_ws();
        if self.src[self.pos..].starts_with("table:") {
            self.pos += "table:".len();
            let path = self.src[self.pos..].trim();
            if path.is_empty() {
                return Err(self.err("expected a path"));
            }
            self.pos = self.src.len();
            return Ok(GroupSpec::Table(path.to_string()));
        }
        let (at, name) = self.word()?;
        if name == "perm" {
            return self.permutations();
        }
        self.expect('(')?;
        let spec = match name {
            "extraspecial" => {
                let p = self.small(2, 4096)? as u32;
                self.expect(',')?;
                let m = self.small(1, 6)? as u32;
                self.expect(',')?;
                self.skip_ws();
                let tat = self.pos;
                let kind = if self.eat('+') {
                    ExtraspecialType::Plus
                } else if self.eat('-') {
                    ExtraspecialType::Minus
                } else {
                    match self.word()?.1 {
                        "D8" | "plus" => ExtraspecialType::Plus,
                        "Q8" | "minus" => ExtraspecialType::Minus,
                        "p" => ExtraspecialType::ExponentP,
                        "p2" => ExtraspecialType::ExponentP2,
                        other => {
                            return Err(Error::ParameterOutOfRange {
                                offset: tat,
                                message: format!("unknown extraspecial type `{other}`"),
                            })
                        }
                    }
                };
                let two = p == 2;
                let plus_minus = matches!(kind, ExtraspecialType::Plus | ExtraspecialType::Minus);
                if two != plus_minus {
                    return Err(Error::ParameterOutOfRange {
                        offset: tat,
                        message: "type must be +/- (D8/Q8) for p = 2 and p/p2 for odd p".into(),
                    });
                }
                GroupSpec::Extraspecial { p, m, kind }
            }
            "dihedral" => GroupSpec::Dihedral(self.small(4, 4096)?),
            "quaternion" => GroupSpec::Quaternion(self.small(8, 4096)?),
            "semidihedral" => GroupSpec::Semidihedral(self.small(16, 4096)?),
            "modular" => GroupSpec::Modular(self.small(16, 4096)?),
            "heisenberg" => GroupSpec::Heisenberg(self.small(2, 16)? as u32),
            "F" => GroupSpec::SignedPermF(self.small(1, 7)? as usize),
            "D" => GroupSpec::DiagonalF(self.small(1, 7)? as usize),
            "P2" => GroupSpec::SylowSym(self.small(1, 8)? as usize),
            "abelian" => {
                let mut orders = vec![self.small(1, 4096)?];
                while self.eat(',') {
                    orders.push(self.small(1, 4096)?);
                }
                GroupSpec::Abelian(orders)
            }
            "gammaQ" | "quotientCenterDiag" => {
                let base = self.spec()?;
                self.expect(',')?;
                let n = self.small(1, 12)? as u32;
                if name == "gammaQ" {
                    GroupSpec::GammaQuotient(Box::new(base), n)
                } else {
                    GroupSpec::CenterDiagonalQuotient(Box::new(base), n)
                }
            }
            "product" => {
                let a = self.spec()?;
                self.expect(',')?;
                let b = self.spec()?;
                GroupSpec::Product(Box::new(a), Box::new(b))
            }
            _ => {
                return Err(Error::UnknownConstructor {
                    name: name.to_string(),
                    offset: at,
                })
            }
        };
        self.args_end()?;
        Ok(spec)
    }

    fn permutations(&mut self) -> Result<GroupSpec> {
        let degree = self.small(1, 64)? as usize;
        self.expect(':')?;
        let mut gens = Vec::new();
        loop {
            let mut perm: Vec<usize> = (0..degree).collect();
            let mut any = false;
            while self.peek() == Some('(') {
                self.pos += 1;
                any = true;
                let mut cycle = Vec::new();
                while self.peek() != Some(')') {
                    let (at, x) = self.number()?;
                    if x == 0 || x as usize > degree {
                        return Err(Error::ParameterOutOfRange {
                            offset: at,
                            message: format!("point {x} not in 1..={degree}"),
                        });
                    }
                    if cycle.contains(&(x as usize - 1)) {
                        return Err(Error::Parse {
                            offset: at,
                            message: "repeated point in cycle".into(),
                        });
                    }
                    cycle.push(x as usize - 1);
                }
                self.pos += 1;
                // cycles are juxtaposed left to right; the leftmost acts first
                let mut step: Vec<usize> = (0..degree).collect();
                for (k, &a) in cycle.iter().enumerate() {
                    step[a] = cycle[(k + 1) % cycle.len()];
                }
                perm = perm.iter().map(|&x| step[x]).collect();
            }
            if !any {
                return Err(self.err("expected a cycle"));
            }
            gens.push(perm);
            if !self.eat(',') {
                break;
            }
        }
        Ok(GroupSpec::Permutations { degree, gens })
    }
}

fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let content = line.split('#').next().unwrap_or("");
        let mut col = 0;
        for tok in content.split_whitespace() {
            let at = content[col..].find(tok).unwrap() + col;
            out.push((offset + at, tok));
            col = at + tok.len();
        }
        offset += line.len();
    }
    out
}

/// Reads `order <n> prime <p>` followed by `n` rows of `n` indices.
/// Text after `#` on a line is ignored.
pub fn parse_cayley_text(text: &str) -> Result<FiniteGroup> {
    let mut it = tokens(text).into_iter();
    let end = text.len();
    let keyword = |it: &mut std::vec::IntoIter<(usize, &str)>, want: &str| -> Result<()> {
        match it.next() {
            Some((_, t)) if t == want => Ok(()),
            Some((at, t)) => Err(Error::Parse {
                offset: at,
                message: format!("expected `{want}`, found `{t}`"),
            }),
            None => Err(Error::Parse {
                offset: end,
                message: format!("expected `{want}`"),
            }),
        }
    };
    let num = |it: &mut std::vec::IntoIter<(usize, &str)>| -> Result<usize> {
        let (at, t) = it.next().ok_or(Error::Parse {
            offset: end,
            message: "unexpected end of table".into(),
        })?;
        t.parse().map_err(|_| Error::Parse {
            offset: at,
            message: format!("`{t}` is not a number"),
        })
    };
    keyword(&mut it, "order")?;
    let n = num(&mut it)?;
    keyword(&mut it, "prime")?;
    let p = num(&mut it)?;
    if n > DEFAULT_ORDER_CAP {
        return Err(Error::OrderCapExceeded { cap: DEFAULT_ORDER_CAP });
    }
    let mut table = vec![vec![0usize; n]; n];
    for row in table.iter_mut() {
        for cell in row.iter_mut() {
            *cell = num(&mut it)?;
        }
    }
    if let Some((at, _)) = it.next() {
        return Err(Error::Parse {
            offset: at,
            message: "extra entries after the table".into(),
        });
    }
    FiniteGroup::from_cayley_table(&table, p as u32)
}

pub fn write_cayley_text(g: &FiniteGroup) -> String {
    let n = g.order();
    let mut out = format!("order {n} prime {}\n", g.prime());
    for a in 0..n {
        let row: Vec<String> = (0..n).map(|b| g.mul(a as Elem, b as Elem).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

const CATALOG: &[&str] = &[
    "abelian(2)",
    "abelian(4)",
    "abelian(2,2)",
    "abelian(8)",
    "abelian(4,2)",
    "abelian(2,2,2)",
    "abelian(16)",
    "abelian(4,4)",
    "abelian(8,2)",
    "abelian(4,2,2)",
    "abelian(2,2,2,2)",
    "abelian(8,4)",
    "abelian(4,2,2,2)",
    "abelian(2,2,2,2,2)",
    "abelian(8,8)",
    "abelian(4,4,4)",
    "abelian(2,2,2,2,2,2)",
    "abelian(3)",
    "abelian(9)",
    "abelian(3,3)",
    "abelian(27)",
    "abelian(9,3)",
    "abelian(3,3,3)",
    "abelian(5,5)",
    "abelian(25)",
    "abelian(7,7)",
    "dihedral(8)",
    "quaternion(8)",
    "dihedral(16)",
    "quaternion(16)",
    "semidihedral(16)",
    "modular(16)",
    "product(dihedral(8),abelian(2))",
    "product(quaternion(8),abelian(2))",
    "dihedral(32)",
    "quaternion(32)",
    "semidihedral(32)",
    "modular(32)",
    "extraspecial(2,2,+)",
    "extraspecial(2,2,-)",
    "product(dihedral(8),abelian(4))",
    "product(quaternion(8),abelian(4))",
    "product(dihedral(8),abelian(2,2))",
    "product(modular(16),abelian(2))",
    "product(dihedral(16),abelian(2))",
    "dihedral(64)",
    "quaternion(64)",
    "semidihedral(64)",
    "modular(64)",
    "product(dihedral(8),dihedral(8))",
    "product(quaternion(8),quaternion(8))",
    "product(dihedral(8),quaternion(8))",
    "product(quaternion(16),abelian(4))",
    "product(extraspecial(2,2,-),abelian(2))",
    "F(2)",
    "F(4)",
    "P2(6)",
    "heisenberg(3)",
    "extraspecial(3,1,p2)",
];

/// The fixed list of small test groups with order at most `max_order`, in
/// catalog order.
pub fn catalog(max_order: usize) -> Result<Vec<(String, FiniteGroup)>> {
    let mut out = Vec::new();
    for text in CATALOG {
        let g = GroupSpec::parse(text)?.build()?;
        if g.order() <= max_order {
            out.push((text.to_string(), g));
        }
    }
    Ok(out)
}
