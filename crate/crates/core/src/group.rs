//! Self-similar group tables and their action on tree levels.
//!
//! A generator is a root permutation `tau` together with one restriction per
//! letter; it acts on a word by `g(xw) = tau(x) . g_x(w)`. The three built-in
//! tables are the Grigorchuk group, the Basilica group and the Hanoi Towers
//! group H(3).

use std::fmt;

use crate::error::{Error, Result};

/// A vertex of the level-n tree: a word over {0..q-1}, first letter first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn repeated(letter: u8, n: usize) -> Self {
        Word(vec![letter; n])
    }

    /// Index of the word in lexicographic order among all q^n words.
    pub fn index(&self, q: usize) -> usize {
        self.0.iter().fold(0, |acc, &d| acc * q + d as usize)
    }

    pub fn from_index(mut idx: usize, q: usize, n: usize) -> Self {
        let mut letters = vec![0u8; n];
        for slot in letters.iter_mut().rev() {
            *slot = (idx % q) as u8;
            idx /= q;
        }
        Word(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Restriction {
    Identity,
    Generator(usize),
}

#[derive(Clone, Debug)]
pub struct GeneratorDef {
    pub name: char,
    /// Root permutation: tau[x] is the image of letter x.
    pub tau: Vec<u8>,
    /// Restriction at each letter x (applies to the suffix after tau moved x).
    pub restrictions: Vec<Restriction>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Grigorchuk,
    Basilica,
    Hanoi,
    Sierpinski,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Grigorchuk => "grigorchuk",
            Family::Basilica => "basilica",
            Family::Hanoi => "hanoi",
            Family::Sierpinski => "sierpinski",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "grigorchuk" => Ok(Family::Grigorchuk),
            "basilica" => Ok(Family::Basilica),
            "hanoi" => Ok(Family::Hanoi),
            "sierpinski" => Ok(Family::Sierpinski),
            _ => Err(Error::InvalidParams(format!("unknown family {s}"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct GroupTable {
    pub family: Family,
    pub q: usize,
    pub generators: Vec<GeneratorDef>,
}

impl GroupTable {
    /// a = eps(id, id), b = e(a, c), c = e(a, d), d = e(id, b)
    pub fn grigorchuk() -> Self {
        use Restriction::*;
        GroupTable {
            family: Family::Grigorchuk,
            q: 2,
            generators: vec![
                GeneratorDef {
                    name: 'a',
                    tau: vec![1, 0],
                    restrictions: vec![Identity, Identity],
                },
                GeneratorDef {
                    name: 'b',
                    tau: vec![0, 1],
                    restrictions: vec![Generator(0), Generator(2)],
                },
                GeneratorDef {
                    name: 'c',
                    tau: vec![0, 1],
                    restrictions: vec![Generator(0), Generator(3)],
                },
                GeneratorDef {
                    name: 'd',
                    tau: vec![0, 1],
                    restrictions: vec![Identity, Generator(1)],
                },
            ],
        }
    }

    /// a = e(b, id), b = eps(a, id)
    pub fn basilica() -> Self {
        use Restriction::*;
        GroupTable {
            family: Family::Basilica,
            q: 2,
            generators: vec![
                GeneratorDef {
                    name: 'a',
                    tau: vec![0, 1],
                    restrictions: vec![Generator(1), Identity],
                },
                GeneratorDef {
                    name: 'b',
                    tau: vec![1, 0],
                    restrictions: vec![Generator(0), Identity],
                },
            ],
        }
    }

    /// a = (01)(id, id, a), b = (02)(id, b, id), c = (12)(c, id, id)
    pub fn hanoi() -> Self {
        use Restriction::*;
        GroupTable {
            family: Family::Hanoi,
            q: 3,
            generators: vec![
                GeneratorDef {
                    name: 'a',
                    tau: vec![1, 0, 2],
                    restrictions: vec![Identity, Identity, Generator(0)],
                },
                GeneratorDef {
                    name: 'b',
                    tau: vec![2, 1, 0],
                    restrictions: vec![Identity, Generator(1), Identity],
                },
                GeneratorDef {
                    name: 'c',
                    tau: vec![0, 2, 1],
                    restrictions: vec![Generator(2), Identity, Identity],
                },
            ],
        }
    }

    pub fn for_family(family: Family) -> Result<Self> {
        match family {
            Family::Grigorchuk => Ok(Self::grigorchuk()),
            Family::Basilica => Ok(Self::basilica()),
            Family::Hanoi => Ok(Self::hanoi()),
            Family::Sierpinski => Err(Error::FamilyMismatch {
                expected: "a group family (grigorchuk, basilica, hanoi)".into(),
                found: "sierpinski (derived by contraction, no group table)".into(),
            }),
        }
    }

    /// Checks that every tau is a bijection of the alphabet and every
    /// restriction names a generator of this table.
    pub fn validate(&self) -> Result<()> {
        for g in &self.generators {
            if g.tau.len() != self.q || g.restrictions.len() != self.q {
                return Err(Error::ConstructionTable(format!(
                    "generator {}: arity mismatch with alphabet size {}",
                    g.name, self.q
                )));
            }
            let mut seen = vec![false; self.q];
            for &y in &g.tau {
                let y = y as usize;
                if y >= self.q || seen[y] {
                    return Err(Error::ConstructionTable(format!(
                        "generator {}: tau is not a bijection",
                        g.name
                    )));
                }
                seen[y] = true;
            }
            for r in &g.restrictions {
                if let Restriction::Generator(i) = r {
                    if *i >= self.generators.len() {
                        return Err(Error::ConstructionTable(format!(
                            "generator {}: restriction names unknown generator #{i}",
                            g.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Applies generator `gen` to a word: g(xw) = tau(x) . g_x(w).
    pub fn apply(&self, gen: usize, w: &Word) -> Word {
        let mut out = w.0.clone();
        let mut cur = Some(gen);
        for slot in out.iter_mut() {
            let Some(g) = cur else { break };
            let x = *slot as usize;
            let def = &self.generators[g];
            *slot = def.tau[x];
            cur = match def.restrictions[x] {
                Restriction::Identity => None,
                Restriction::Generator(h) => Some(h),
            };
        }
        Word(out)
    }

    /// Whether generator `gen` squares to the identity as a tree automorphism.
    ///
    /// Decided exactly on the composition automaton: s.s = id iff every
    /// reachable composite state (g, h) has trivial root permutation
    /// tau_g . tau_h. Per-level checks are not enough: the Basilica b acts
    /// as an involution on levels 1 and 2 but not on level 3, and the edge
    /// multiplicity of the Schreier graph follows the group element.
    pub fn is_involution(&self, gen: usize) -> bool {
        type State = (Option<usize>, Option<usize>);
        let start: State = (Some(gen), Some(gen));
        let mut seen = vec![start];
        let mut queue = vec![start];
        while let Some((p, q)) = queue.pop() {
            // Composite tau.
            for x in 0..self.q {
                let y = match q {
                    Some(h) => self.generators[h].tau[x] as usize,
                    None => x,
                };
                let z = match p {
                    Some(g) => self.generators[g].tau[y] as usize,
                    None => y,
                };
                if z != x {
                    return false;
                }
            }
            for x in 0..self.q {
                let (qy, qres) = match q {
                    Some(h) => (
                        self.generators[h].tau[x] as usize,
                        restriction_of(&self.generators[h], x),
                    ),
                    None => (x, None),
                };
                let pres = match p {
                    Some(g) => restriction_of(&self.generators[g], qy),
                    None => None,
                };
                let next = (pres, qres);
                if next != (None, None) && !seen.contains(&next) {
                    seen.push(next);
                    queue.push(next);
                }
            }
        }
        true
    }

    pub fn generator_index(&self, name: char) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::ConstructionTable(format!("unknown generator {name}")))
    }
}

fn restriction_of(g: &GeneratorDef, x: usize) -> Option<usize> {
    match g.restrictions[x] {
        Restriction::Identity => None,
        Restriction::Generator(h) => Some(h),
    }
}
