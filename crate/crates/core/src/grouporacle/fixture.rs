//! Line-oriented regression fixtures: a matrix group with a labelled quotient,
//! a central element z, and expected solution counts.
//!
//! ```text
//! # quaternion group over F_3
//! field 3 1
//! dim 2
//! quotient 2 2
//! gen 1 0 : 0 1 2 0
//! gen 0 1 : 1 1 1 2
//! z : 2 0 0 2
//! count g=1 a=1/0 b=0/1 expected=4
//! ```
//!
//! Matrix entries are field element codes in row-major order. `a` and `b`
//! hold one quotient label per handle, comma separated.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use super::clifford::{brute_count, formula_count, CliffordSetting};
use super::field::make_field;
use super::group::{generate_labeled, Label};
use super::matrix::Matrix;
use super::{Caps, OracleError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountLine {
    pub genus: u32,
    pub a: Vec<Label>,
    pub b: Vec<Label>,
    pub expected: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub p: u32,
    pub k: u32,
    pub dim: usize,
    pub moduli: [u32; 2],
    pub generators: Vec<(Matrix, Label)>,
    pub z: Matrix,
    pub counts: Vec<CountLine>,
}

/// Result of one `count` line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountOutcome {
    pub line: CountLine,
    pub brute: BigInt,
    /// `None` when the labels do not generate the quotient.
    pub formula: Option<BigInt>,
}

impl CountOutcome {
    pub fn passed(&self) -> bool {
        self.brute == self.line.expected && self.formula.as_ref().is_none_or(|f| *f == self.brute)
    }
}

fn err(line: usize, msg: impl Into<String>) -> OracleError {
    OracleError::Parse { line, msg: msg.into() }
}

fn parse_num<T: FromStr>(line: usize, s: &str) -> Result<T, OracleError> {
    s.parse().map_err(|_| err(line, format!("expected a number, found {s:?}")))
}

fn parse_labels(line: usize, s: &str) -> Result<Vec<Label>, OracleError> {
    s.split(',')
        .map(|pair| {
            let (x, y) = pair.split_once('/').ok_or_else(|| err(line, format!("label {pair:?} is not x/y")))?;
            Ok([parse_num(line, x)?, parse_num(line, y)?])
        })
        .collect()
}

impl FromStr for Fixture {
    type Err = OracleError;

    fn from_str(text: &str) -> Result<Self, OracleError> {
        let (mut field, mut dim, mut moduli, mut z) = (None, None, None, None);
        let mut generators = Vec::new();
        let mut counts = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (head, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
            let words: Vec<&str> = rest.split_whitespace().collect();
            match head {
                "field" => {
                    let [p, k] = words[..] else { return Err(err(line, "field takes p and k")) };
                    field = Some((parse_num(line, p)?, parse_num(line, k)?));
                }
                "dim" => {
                    let [n] = words[..] else { return Err(err(line, "dim takes one value")) };
                    dim = Some(parse_num::<usize>(line, n)?);
                }
                "quotient" => {
                    let [a, b] = words[..] else { return Err(err(line, "quotient takes A and B")) };
                    moduli = Some([parse_num(line, a)?, parse_num(line, b)?]);
                }
                "gen" | "z" => {
                    let (label_part, entries) =
                        rest.split_once(':').ok_or_else(|| err(line, "missing ':' before the entries"))?;
                    let entries: Matrix =
                        entries.split_whitespace().map(|e| parse_num(line, e)).collect::<Result<_, _>>()?;
                    let n = dim.ok_or_else(|| err(line, "dim must precede matrices"))?;
                    if entries.len() != n * n {
                        return Err(err(line, format!("expected {} entries, found {}", n * n, entries.len())));
                    }
                    if head == "z" {
                        z = Some(entries);
                    } else {
                        let l: Vec<u32> =
                            label_part.split_whitespace().map(|e| parse_num(line, e)).collect::<Result<_, _>>()?;
                        let [la, lb] = l[..] else { return Err(err(line, "gen takes two labels")) };
                        generators.push((entries, [la, lb]));
                    }
                }
                "count" => {
                    let (mut genus, mut a, mut b, mut expected) = (None, None, None, None);
                    for w in &words {
                        let (key, value) = w.split_once('=').ok_or_else(|| err(line, format!("{w:?} is not key=value")))?;
                        match key {
                            "g" => genus = Some(parse_num(line, value)?),
                            "a" => a = Some(parse_labels(line, value)?),
                            "b" => b = Some(parse_labels(line, value)?),
                            "expected" => expected = Some(parse_num(line, value)?),
                            _ => return Err(err(line, format!("unknown key {key:?}"))),
                        }
                    }
                    let (Some(genus), Some(a), Some(b), Some(expected)) = (genus, a, b, expected) else {
                        return Err(err(line, "count needs g, a, b and expected"));
                    };
                    counts.push(CountLine { genus, a, b, expected });
                }
                other => return Err(err(line, format!("unknown directive {other:?}"))),
            }
        }
        let last = text.lines().count();
        let (p, k) = field.ok_or_else(|| err(last, "missing field line"))?;
        Ok(Fixture {
            p,
            k,
            dim: dim.ok_or_else(|| err(last, "missing dim line"))?,
            moduli: moduli.unwrap_or([1, 1]),
            generators,
            z: z.ok_or_else(|| err(last, "missing z line"))?,
            counts,
        })
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn labels(ls: &[Label]) -> String {
    ls.iter().map(|[x, y]| format!("{x}/{y}")).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field {} {}", self.p, self.k)?;
        writeln!(f, "dim {}", self.dim)?;
        writeln!(f, "quotient {} {}", self.moduli[0], self.moduli[1])?;
        for (m, [la, lb]) in &self.generators {
            writeln!(f, "gen {la} {lb} : {}", join(m))?;
        }
        writeln!(f, "z : {}", join(&self.z))?;
        for c in &self.counts {
            writeln!(f, "count g={} a={} b={} expected={}", c.genus, labels(&c.a), labels(&c.b), c.expected)?;
        }
        Ok(())
    }
}

impl Fixture {
    /// Build the group and quotient the fixture describes.
    pub fn setting(&self, caps: Caps) -> Result<CliffordSetting, OracleError> {
        let field = make_field(self.p, self.k)?;
        let (g, labels) = generate_labeled(&field, self.dim, &self.generators, self.moduli, caps.max_group_order)?;
        CliffordSetting::new(g, labels, self.moduli, caps)
    }

    /// Brute-force every count line, and the character formula where it applies.
    pub fn run(&self, caps: Caps) -> Result<Vec<CountOutcome>, OracleError> {
        self.run_on(&self.setting(caps)?)
    }

    /// As `run`, on a setting built elsewhere (for instance from a cached
    /// enumeration of the same group).
    pub fn run_on(&self, s: &CliffordSetting) -> Result<Vec<CountOutcome>, OracleError> {
        let z = s
            .group()
            .index_of(&self.z)
            .ok_or_else(|| OracleError::InvalidParameters("z is not in the group".into()))?;
        self.counts
            .iter()
            .map(|line| {
                let brute = brute_count(s, line.genus, z, &line.a, &line.b)?;
                let formula = match formula_count(s, line.genus, z, &line.a, &line.b) {
                    Ok(v) => Some(v),
                    Err(OracleError::NotGenerating) => None,
                    Err(e) => return Err(e),
                };
                Ok(CountOutcome { line: line.clone(), brute, formula })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const QUATERNION: &str = "\
# quaternion group over F_3
field 3 1
dim 2
quotient 2 2
gen 1 0 : 0 1 2 0
gen 0 1 : 1 1 1 2
z : 2 0 0 2
count g=1 a=1/0 b=0/1 expected=4
count g=1 a=0/0 b=0/0 expected=0
";

    #[test]
    fn round_trip() {
        let fx: Fixture = QUATERNION.parse().unwrap();
        assert_eq!(fx.generators.len(), 2);
        let again: Fixture = fx.to_string().parse().unwrap();
        assert_eq!(fx, again);
    }

    #[test]
    fn runs_against_brute_force() {
        // x ∈ ±i, y ∈ ±j always have [x, y] = -1 = z^{-1}; inside H = ±1 nothing does
        let fx: Fixture = QUATERNION.parse().unwrap();
        let outcome = fx.run(Caps::default()).unwrap();
        assert!(outcome.iter().all(CountOutcome::passed));
        assert_eq!(outcome[0].formula, Some(BigInt::from(4)));
        assert_eq!(outcome[1].formula, None);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let bad = "field 3 1\ndim 2\ngen 1 0 : 0 1 2\n";
        assert!(matches!(bad.parse::<Fixture>(), Err(OracleError::Parse { line: 3, .. })));
        assert!(matches!("field x 1".parse::<Fixture>(), Err(OracleError::Parse { line: 1, .. })));
        assert!(matches!("field 3 1\nbogus\n".parse::<Fixture>(), Err(OracleError::Parse { line: 2, .. })));
    }
}
