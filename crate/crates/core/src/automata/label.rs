use std::fmt;

/// A conjunction of literals over proposition bits: every bit of `pos` must
/// be true and every bit of `neg` false.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    pub pos: u64,
    pub neg: u64,
}

impl Cube {
    pub const TRUE: Cube = Cube { pos: 0, neg: 0 };

    /// The cube admitting exactly `letter` among valuations of the bits in `mask`.
    pub fn minterm(letter: u64, mask: u64) -> Cube {
        Cube { pos: letter & mask, neg: !letter & mask }
    }

    pub fn matches(&self, letter: u64) -> bool {
        letter & self.pos == self.pos && letter & self.neg == 0
    }

    pub fn and(&self, other: &Cube) -> Option<Cube> {
        let c = Cube { pos: self.pos | other.pos, neg: self.neg | other.neg };
        (c.pos & c.neg == 0).then_some(c)
    }

    pub fn support(&self) -> u64 {
        self.pos | self.neg
    }

    /// True if every valuation admitted by `self` is admitted by `other`.
    pub fn implies(&self, other: &Cube) -> bool {
        other.pos & !self.pos == 0 && other.neg & !self.neg == 0
    }

    /// Moves bit `i` to `map[i]`; bits mapped to `None` are existentially
    /// dropped.
    pub fn remap(&self, map: &[Option<usize>]) -> Cube {
        let mut out = Cube::TRUE;
        for (i, target) in map.iter().enumerate() {
            if let Some(t) = target {
                if self.pos >> i & 1 == 1 {
                    out.pos |= 1 << t;
                }
                if self.neg >> i & 1 == 1 {
                    out.neg |= 1 << t;
                }
            }
        }
        out
    }

    fn consensus(&self, other: &Cube) -> Option<Cube> {
        let clash = (self.pos & other.neg) | (self.neg & other.pos);
        if clash.count_ones() != 1 {
            return None;
        }
        Some(Cube { pos: (self.pos | other.pos) & !clash, neg: (self.neg | other.neg) & !clash })
    }
}

/// A Boolean constraint over proposition bits in disjunctive normal form.
///
/// Labels are kept as the sorted set of all prime implicants, which is a
/// canonical form: two labels are equal iff they admit the same valuations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Label {
    cubes: Vec<Cube>,
}

impl Label {
    pub fn tt() -> Label {
        Label { cubes: vec![Cube::TRUE] }
    }

    pub fn ff() -> Label {
        Label { cubes: Vec::new() }
    }

    pub fn from_cube(cube: Cube) -> Label {
        Label::from_cubes([cube])
    }

    /// Single literal on bit `bit`.
    pub fn literal(bit: usize, positive: bool) -> Label {
        let mask = 1u64 << bit;
        Label::from_cube(if positive { Cube { pos: mask, neg: 0 } } else { Cube { pos: 0, neg: mask } })
    }

    pub fn from_cubes(cubes: impl IntoIterator<Item = Cube>) -> Label {
        let mut cubes: Vec<Cube> = cubes.into_iter().filter(|c| c.pos & c.neg == 0).collect();
        prime_implicants(&mut cubes);
        Label { cubes }
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn is_false(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn is_true(&self) -> bool {
        self.cubes.len() == 1 && self.cubes[0] == Cube::TRUE
    }

    pub fn matches(&self, letter: u64) -> bool {
        self.cubes.iter().any(|c| c.matches(letter))
    }

    /// Bits mentioned by some cube.
    pub fn support(&self) -> u64 {
        self.cubes.iter().fold(0, |acc, c| acc | c.support())
    }

    /// The numerically smallest admitted valuation, if any.
    pub fn min_letter(&self) -> Option<u64> {
        self.cubes.iter().map(|c| c.pos).min()
    }

    pub fn or(&self, other: &Label) -> Label {
        Label::from_cubes(self.cubes.iter().chain(other.cubes.iter()).copied())
    }

    pub fn and(&self, other: &Label) -> Label {
        Label::from_cubes(self.cubes.iter().flat_map(|a| other.cubes.iter().filter_map(move |b| a.and(b))))
    }

    pub fn intersects(&self, other: &Label) -> bool {
        self.cubes.iter().any(|a| other.cubes.iter().any(|b| a.and(b).is_some()))
    }

    pub fn negate(&self) -> Label {
        Label::from_cubes(negate_cubes(&self.cubes))
    }

    /// Existential quantification and renaming; see [`Cube::remap`].
    pub fn remap(&self, map: &[Option<usize>]) -> Label {
        Label::from_cubes(self.cubes.iter().map(|c| c.remap(map)))
    }

    /// Renders the label with proposition names, e.g. `i & !o | o2`.
    pub fn display<'a>(&'a self, aps: &'a [String]) -> impl fmt::Display + 'a {
        LabelDisplay { label: self, aps }
    }
}

struct LabelDisplay<'a> {
    label: &'a Label,
    aps: &'a [String],
}

impl fmt::Display for LabelDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.label.is_false() {
            return write!(f, "false");
        }
        for (k, c) in self.label.cubes.iter().enumerate() {
            if k > 0 {
                write!(f, " | ")?;
            }
            if *c == Cube::TRUE {
                write!(f, "true")?;
                continue;
            }
            let mut first = true;
            for (i, name) in self.aps.iter().enumerate() {
                let neg = c.neg >> i & 1 == 1;
                if c.pos >> i & 1 == 1 || neg {
                    if !first {
                        write!(f, " & ")?;
                    }
                    first = false;
                    write!(f, "{}{name}", if neg { "!" } else { "" })?;
                }
            }
        }
        Ok(())
    }
}

// Iterated consensus with absorption; leaves exactly the prime implicants,
// sorted.
fn prime_implicants(cubes: &mut Vec<Cube>) {
    cubes.sort();
    cubes.dedup();
    absorb(cubes);
    let mut i = 0;
    while i < cubes.len() {
        let mut j = 0;
        let mut restart = false;
        while j < i {
            if let Some(c) = cubes[i].consensus(&cubes[j]) {
                if !cubes.iter().any(|e| c.implies(e)) {
                    cubes.retain(|e| !e.implies(&c));
                    cubes.push(c);
                    restart = true;
                    break;
                }
            }
            j += 1;
        }
        if restart {
            i = 0;
        } else {
            i += 1;
        }
    }
    cubes.sort();
}

fn absorb(cubes: &mut Vec<Cube>) {
    let snapshot = cubes.clone();
    cubes.retain(|c| !snapshot.iter().any(|e| e != c && c.implies(e)));
}

// Shannon expansion on the lowest mentioned bit.
fn negate_cubes(cubes: &[Cube]) -> Vec<Cube> {
    if cubes.is_empty() {
        return vec![Cube::TRUE];
    }
    if cubes.iter().any(|c| *c == Cube::TRUE) {
        return Vec::new();
    }
    let support = cubes.iter().fold(0u64, |acc, c| acc | c.support());
    let bit = 1u64 << support.trailing_zeros();
    let cofactor = |value: bool| -> Vec<Cube> {
        cubes
            .iter()
            .filter(|c| if value { c.neg & bit == 0 } else { c.pos & bit == 0 })
            .map(|c| Cube { pos: c.pos & !bit, neg: c.neg & !bit })
            .collect()
    };
    let mut out = Vec::new();
    for c in negate_cubes(&cofactor(true)) {
        out.push(Cube { pos: c.pos | bit, neg: c.neg });
    }
    for c in negate_cubes(&cofactor(false)) {
        out.push(Cube { pos: c.pos, neg: c.neg | bit });
    }
    out
}
