//! Potential functions accepted by the solver.
//!
//! Every potential lives on a closed interval `[a, b]` bounded by infinite
//! walls. Inside the interval it is one of a few closed forms or a table
//! interpolated linearly between its nodes.
//!
//! The textual form understood by [`Shape::parse`] is
//!
//! ```text
//! squarewell | harmonic | poly:<c>*x^<k>(+<c>*x^<k>)* | morse:<V0>,<lambda> | table:<path>
//! ```
//!
//! and [`Shape`]'s `Display` impl renders the same canonical form back.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{validation, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialKind {
    SquareWell,
    Harmonic,
    PolynomialAnharmonic,
    Morse,
    Tabulated,
}

/// One term `coefficient * x^exponent` of a polynomial potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monomial {
    pub exponent: u32,
    pub coefficient: f64,
}

/// Sampled potential, strictly increasing in `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    source: Option<PathBuf>,
    points: Vec<(f64, f64)>,
}

impl Table {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(validation("table", "need at least two (x, V) points"));
        }
        for (i, &(x, v)) in points.iter().enumerate() {
            if !x.is_finite() || !v.is_finite() {
                return Err(validation("table", format!("row {} is not finite", i + 1)));
            }
        }
        if let Some(i) = points.windows(2).position(|w| w[1].0 <= w[0].0) {
            return Err(validation(
                "table",
                format!("x must be strictly increasing (rows {} and {})", i + 1, i + 2),
            ));
        }
        Ok(Self {
            source: None,
            points,
        })
    }

    /// Reads a whitespace-separated `x V` table, one pair per line; `#` starts a comment.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut table = Self::parse_text(&text)?;
        table.source = Some(path.to_path_buf());
        Ok(table)
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        let mut offset = 0;
        for line in text.lines() {
            let start = offset;
            offset += line.len() + 1;
            let content = line.split('#').next().unwrap_or("");
            let mut fields = content.split_whitespace();
            let Some(xs) = fields.next() else { continue };
            let (Some(vs), None) = (fields.next(), fields.next()) else {
                return Err(Error::Parse {
                    position: start,
                    message: format!("expected exactly two columns in line {line:?}"),
                });
            };
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|_| Error::Parse {
                    position: start,
                    message: format!("invalid number {s:?}"),
                })
            };
            points.push((parse(xs)?, parse(vs)?));
        }
        Self::new(points)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn source(&self) -> Option<&Path> {
        self.source.as_deref()
    }

    fn interpolate(&self, x: f64) -> f64 {
        let pts = &self.points;
        // first index with node x > query
        let upper = pts.partition_point(|&(xi, _)| xi <= x);
        if upper == 0 {
            return pts[0].1;
        }
        if upper == pts.len() {
            return pts[pts.len() - 1].1;
        }
        let (x0, v0) = pts[upper - 1];
        let (x1, v1) = pts[upper];
        v0 + (v1 - v0) * ((x - x0) / (x1 - x0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    SquareWell,
    Harmonic,
    Polynomial(Vec<Monomial>),
    Morse { depth: f64, range: f64 },
    Tabulated(Table),
}

impl Shape {
    pub fn kind(&self) -> PotentialKind {
        match self {
            Shape::SquareWell => PotentialKind::SquareWell,
            Shape::Harmonic => PotentialKind::Harmonic,
            Shape::Polynomial(_) => PotentialKind::PolynomialAnharmonic,
            Shape::Morse { .. } => PotentialKind::Morse,
            Shape::Tabulated(_) => PotentialKind::Tabulated,
        }
    }

    /// Parses the potential mini-grammar. Table files are read here.
    pub fn parse(text: &str) -> Result<Self> {
        let shape = match text {
            "squarewell" => Shape::SquareWell,
            "harmonic" => Shape::Harmonic,
            _ => {
                if let Some(body) = text.strip_prefix("poly:") {
                    Shape::Polynomial(parse_poly(body, "poly:".len())?)
                } else if let Some(body) = text.strip_prefix("morse:") {
                    parse_morse(body, "morse:".len())?
                } else if let Some(path) = text.strip_prefix("table:") {
                    if path.is_empty() {
                        return Err(Error::Parse {
                            position: text.len(),
                            message: "missing table path".into(),
                        });
                    }
                    Shape::Tabulated(Table::load(path)?)
                } else {
                    return Err(Error::Parse {
                        position: 0,
                        message: format!(
                            "unknown potential {text:?}; expected squarewell, harmonic, poly:, morse: or table:"
                        ),
                    });
                }
            }
        };
        shape.validate()?;
        Ok(shape)
    }

    fn validate(&self) -> Result<()> {
        match self {
            Shape::Polynomial(terms) => {
                if terms.is_empty() {
                    return Err(validation("poly", "at least one term required"));
                }
                if terms.iter().any(|t| !t.coefficient.is_finite()) {
                    return Err(validation("poly", "coefficients must be finite"));
                }
            }
            Shape::Morse { depth, range } => {
                if !(depth.is_finite() && *depth > 0.0) {
                    return Err(validation("V0", format!("Morse depth must be > 0, got {depth}")));
                }
                if !(range.is_finite() && *range > 0.0) {
                    return Err(validation(
                        "lambda",
                        format!("Morse range parameter must be > 0, got {range}"),
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn value(&self, x: f64) -> f64 {
        match self {
            Shape::SquareWell => 0.0,
            Shape::Harmonic => x * x,
            Shape::Polynomial(terms) => terms
                .iter()
                .map(|t| t.coefficient * x.powi(t.exponent as i32))
                .sum(),
            Shape::Morse { depth, range } => {
                let s = -(-range * x).exp_m1();
                depth * s * s
            }
            Shape::Tabulated(table) => table.interpolate(x),
        }
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Shape::parse(s)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::SquareWell => f.write_str("squarewell"),
            Shape::Harmonic => f.write_str("harmonic"),
            Shape::Polynomial(terms) => {
                f.write_str("poly:")?;
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str("+")?;
                    }
                    write!(f, "{}*x^{}", t.coefficient, t.exponent)?;
                }
                Ok(())
            }
            Shape::Morse { depth, range } => write!(f, "morse:{depth},{range}"),
            Shape::Tabulated(table) => match table.source() {
                Some(p) => write!(f, "table:{}", p.display()),
                None => write!(f, "table:<{} points>", table.points.len()),
            },
        }
    }
}

/// Positions of the two infinite walls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Walls {
    pub left: f64,
    pub right: f64,
}

impl Walls {
    pub fn new(left: f64, right: f64) -> Result<Self> {
        if !left.is_finite() || !right.is_finite() {
            return Err(validation("walls", "wall positions must be finite"));
        }
        if right <= left {
            return Err(validation(
                "walls",
                format!("right wall must exceed left wall (got a={left}, b={right})"),
            ));
        }
        Ok(Self { left, right })
    }

    pub fn symmetric(half_width: f64) -> Result<Self> {
        Self::new(-half_width, half_width)
    }

    pub fn width(&self) -> f64 {
        self.right - self.left
    }

    pub fn half_width(&self) -> f64 {
        0.5 * self.width()
    }
}

/// A potential shape together with its walls.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    shape: Shape,
    walls: Walls,
}

impl PotentialSpec {
    pub fn new(shape: Shape, walls: Walls) -> Result<Self> {
        shape.validate()?;
        if let Shape::Tabulated(table) = &shape {
            let first = table.points[0].0;
            let last = table.points[table.points.len() - 1].0;
            if first > walls.left || last < walls.right {
                return Err(validation(
                    "table",
                    format!(
                        "table spans [{first}, {last}] but must cover [{}, {}]",
                        walls.left, walls.right
                    ),
                ));
            }
        }
        Ok(Self { shape, walls })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn walls(&self) -> Walls {
        self.walls
    }

    pub fn kind(&self) -> PotentialKind {
        self.shape.kind()
    }

    /// V(x) for `a <= x <= b`.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !(self.walls.left..=self.walls.right).contains(&x) {
            return Err(Error::Domain(format!(
                "x = {x} lies outside the walls [{}, {}]",
                self.walls.left, self.walls.right
            )));
        }
        Ok(self.shape.value(x))
    }

    /// Same as [`evaluate`](Self::evaluate) without the wall check; callers
    /// guarantee `x` is inside.
    pub(crate) fn value_unchecked(&self, x: f64) -> f64 {
        self.shape.value(x)
    }
}

/// Parses `text` with the potential grammar and attaches walls `[a, b]`.
pub fn parse_potential(text: &str, a: f64, b: f64) -> Result<PotentialSpec> {
    PotentialSpec::new(Shape::parse(text)?, Walls::new(a, b)?)
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    base: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.text.as_bytes().get(self.pos).copied()
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            position: self.base + self.pos,
            message: message.into(),
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.pos - start
    }

    /// Signed decimal literal with optional fraction and exponent.
    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        if matches!(self.peek(), Some(b'+' | b'-')) {
            self.pos += 1;
        }
        let mut mantissa = self.digits();
        if self.peek() == Some(b'.') {
            self.pos += 1;
            mantissa += self.digits();
        }
        if mantissa == 0 {
            self.pos = start;
            return Err(self.error("expected a number"));
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let before = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.digits() == 0 {
                self.pos = before;
            }
        }
        let literal = &self.text[start..self.pos];
        literal.parse().map_err(|_| Error::Parse {
            position: self.base + start,
            message: format!("invalid number {literal:?}"),
        })
    }

    fn unsigned(&mut self) -> Result<u32> {
        let start = self.pos;
        if self.digits() == 0 {
            return Err(self.error("expected a non-negative integer exponent"));
        }
        self.text[start..self.pos].parse().map_err(|_| Error::Parse {
            position: self.base + start,
            message: "exponent out of range".into(),
        })
    }
}

fn parse_poly(body: &str, base: usize) -> Result<Vec<Monomial>> {
    let mut cur = Cursor {
        text: body,
        pos: 0,
        base,
    };
    let mut terms = Vec::new();
    loop {
        let coefficient = cur.number()?;
        cur.expect(b'*')?;
        cur.expect(b'x')?;
        cur.expect(b'^')?;
        let exponent = cur.unsigned()?;
        terms.push(Monomial {
            exponent,
            coefficient,
        });
        match cur.peek() {
            None => break,
            Some(b'+') => cur.pos += 1,
            Some(_) => return Err(cur.error("expected '+' or end of input")),
        }
    }
    Ok(terms)
}

fn parse_morse(body: &str, base: usize) -> Result<Shape> {
    let mut cur = Cursor {
        text: body,
        pos: 0,
        base,
    };
    let depth = cur.number()?;
    cur.expect(b',')?;
    let range = cur.number()?;
    if cur.peek().is_some() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(Shape::Morse { depth, range })
}
