//! Block programs: finite descriptions of infinite binary sequences, used
//! as exact itineraries for the doubling map.
//!
//! Text form, one block per `;`:
//!
//! ```text
//! (0)x(4);(01)x(2)          explicit repetition counts
//! (0)x(64);(01)x(*4)        "*r": repeat until the block is r times the prefix
//! (0)x(8);(01)x(8);...      trailing "..." cycles through the blocks forever
//! (0)x(4)@32                "@B": bit budget per evaluated point
//! ```
//!
//! A program that does not cycle continues with its last word forever.

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::seed::{self, Domain};
use crate::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 53;

/// A finite nonempty binary word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(Vec<bool>);

impl Word {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::Parse("empty binary word".into()));
        }
        Ok(Word(bits))
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("'{other}' is not a binary digit"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(bits)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Repetition {
    Count(u64),
    /// Repeat the word until the block reaches `ceil(ratio * prefix_bits)`
    /// bits (at least once).
    Grow(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub word: Word,
    pub repetition: Repetition,
}

impl Block {
    pub fn count(word: Word, count: u64) -> Self {
        Block { word, repetition: Repetition::Count(count) }
    }

    fn repetitions(&self, prefix_bits: u64) -> u64 {
        match self.repetition {
            Repetition::Count(c) => c,
            Repetition::Grow(ratio) => {
                let target = (ratio * prefix_bits as f64).ceil() as u64;
                target.div_ceil(self.word.len() as u64).max(1)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockProgram {
    pub blocks: Vec<Block>,
    pub cycle: bool,
    pub precision: u32,
}

impl BlockProgram {
    pub fn new(blocks: Vec<Block>, cycle: bool, precision: u32) -> Result<Self> {
        let program = BlockProgram { blocks, cycle, precision };
        program.validate()?;
        Ok(program)
    }

    fn validate(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::Parse("block program has no blocks".into()));
        }
        if !(1..=DEFAULT_PRECISION).contains(&self.precision) {
            return Err(Error::config(format!("bit budget {} outside 1..=53", self.precision)));
        }
        for block in &self.blocks {
            match block.repetition {
                Repetition::Count(_) => {}
                Repetition::Grow(r) if r.is_finite() && r > 0.0 => {}
                Repetition::Grow(r) => return Err(Error::config(format!("growth ratio {r} must be positive"))),
            }
        }
        if self.cycle && self.blocks.iter().all(|b| b.repetition == Repetition::Count(0)) {
            return Err(Error::config("cycling program emits no bits"));
        }
        Ok(())
    }

    /// Bits contributed by explicit blocks before cycling or the tail.
    pub fn explicit_len(&self) -> u64 {
        let mut total = 0u64;
        for block in &self.blocks {
            total += block.repetitions(total) * block.word.len() as u64;
        }
        total
    }

    pub fn stream(&self) -> BitStream {
        BitStream::Program(ProgramCursor::new(self.clone()))
    }

    /// The first `len` bits of the sequence.
    pub fn prefix(&self, len: usize) -> Vec<bool> {
        let mut s = self.stream();
        (0..len).map(|_| s.next_bit()).collect()
    }
}

impl fmt::Display for BlockProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            match block.repetition {
                Repetition::Count(c) => write!(f, "({})x({})", block.word, c)?,
                Repetition::Grow(r) => write!(f, "({})x(*{})", block.word, r)?,
            }
        }
        if self.cycle {
            f.write_str(";...")?;
        }
        if self.precision != DEFAULT_PRECISION {
            write!(f, "@{}", self.precision)?;
        }
        Ok(())
    }
}

impl FromStr for BlockProgram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (body, precision) = match s.rsplit_once('@') {
            Some((body, p)) => {
                let p = p.parse::<u32>().map_err(|e| Error::Parse(format!("bit budget '{p}': {e}")))?;
                (body.to_string(), p)
            }
            None => (s, DEFAULT_PRECISION),
        };
        let mut cycle = false;
        let mut blocks = Vec::new();
        for part in body.split(';') {
            if part == "..." {
                cycle = true;
                continue;
            }
            if cycle {
                return Err(Error::Parse("'...' must be the last block".into()));
            }
            blocks.push(parse_block(part)?);
        }
        BlockProgram::new(blocks, cycle, precision)
    }
}

fn parse_block(part: &str) -> Result<Block> {
    let bad = || Error::Parse(format!("malformed block '{part}', expected (word)x(count)"));
    let rest = part.strip_prefix('(').ok_or_else(bad)?;
    let (word, rest) = rest.split_once(')').ok_or_else(bad)?;
    let rest = rest.strip_prefix("x(").ok_or_else(bad)?;
    let count = rest.strip_suffix(')').ok_or_else(bad)?;
    let word: Word = word.parse()?;
    let repetition = if let Some(r) = count.strip_prefix('*') {
        Repetition::Grow(r.parse().map_err(|_| bad())?)
    } else {
        Repetition::Count(count.parse().map_err(|_| bad())?)
    };
    Ok(Block { word, repetition })
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for BlockProgram {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BlockProgram {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Where the bits of a symbolic doubling orbit come from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BitSource {
    Program(BlockProgram),
    /// Independent fair bits from the seeded stream: a Lebesgue-typical
    /// point of the circle.
    Random { seed: u64, precision: u32 },
}

impl BitSource {
    pub fn precision(&self) -> u32 {
        match self {
            BitSource::Program(p) => p.precision,
            BitSource::Random { precision, .. } => *precision,
        }
    }

    pub fn stream(&self) -> BitStream {
        match self {
            BitSource::Program(p) => p.stream(),
            BitSource::Random { seed, .. } => BitStream::Random {
                rng: seed::stream(*seed, Domain::RandomBits, 0),
                buffer: 0,
                left: 0,
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProgramCursor {
    program: BlockProgram,
    block: usize,
    reps_left: u64,
    pos: usize,
    emitted: u64,
    in_tail: bool,
}

impl ProgramCursor {
    fn new(program: BlockProgram) -> Self {
        let mut cursor = ProgramCursor { program, block: 0, reps_left: 0, pos: 0, emitted: 0, in_tail: false };
        cursor.enter_block(0);
        cursor
    }

    fn enter_block(&mut self, idx: usize) {
        self.block = idx;
        self.pos = 0;
        self.reps_left = self.program.blocks[idx].repetitions(self.emitted);
    }

    /// Moves to the next block with at least one repetition, or to the tail.
    fn advance(&mut self) {
        let n = self.program.blocks.len();
        let mut steps = 0;
        while self.reps_left == 0 && !self.in_tail {
            let next = self.block + 1;
            if next < n {
                self.enter_block(next);
            } else if self.program.cycle {
                self.enter_block(0);
            } else {
                self.in_tail = true;
                self.pos = 0;
            }
            steps += 1;
            debug_assert!(steps <= 2 * n + 2, "validated programs always emit");
        }
    }

    fn next_bit(&mut self) -> bool {
        if self.in_tail {
            let word = self.program.blocks.last().expect("nonempty").word.bits();
            let bit = word[self.pos];
            self.pos = (self.pos + 1) % word.len();
            self.emitted += 1;
            return bit;
        }
        self.advance();
        if self.in_tail {
            return self.next_bit();
        }
        let word = self.program.blocks[self.block].word.bits();
        let bit = word[self.pos];
        self.pos += 1;
        self.emitted += 1;
        if self.pos == word.len() {
            self.pos = 0;
            self.reps_left -= 1;
        }
        bit
    }
}

#[derive(Clone, Debug)]
pub enum BitStream {
    Program(ProgramCursor),
    Random { rng: ChaCha8Rng, buffer: u64, left: u32 },
}

impl BitStream {
    pub fn next_bit(&mut self) -> bool {
        match self {
            BitStream::Program(cursor) => cursor.next_bit(),
            BitStream::Random { rng, buffer, left } => {
                if *left == 0 {
                    *buffer = rng.next_u64();
                    *left = 64;
                }
                let bit = (*buffer >> 63) & 1 == 1;
                *buffer <<= 1;
                *left -= 1;
                bit
            }
        }
    }
}

/// The real number `0.b_0 b_1 ... b_{B-1}` (binary).
pub fn bits_to_point(bits: &[bool]) -> f64 {
    bits.iter().rev().fold(0.0, |acc, &b| (acc + if b { 1.0 } else { 0.0 }) * 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn explicit_counts_then_last_word_tail() {
        let p: BlockProgram = "(0)x(4);(01)x(2)".parse().unwrap();
        assert_eq!(p.prefix(12), bits("000001010101"));
        assert_eq!(p.explicit_len(), 8);
    }

    #[test]
    fn cycling_program_repeats() {
        let p: BlockProgram = "(1)x(2);(0)x(1);...".parse().unwrap();
        assert_eq!(p.prefix(9), bits("110110110"));
    }

    #[test]
    fn growth_blocks_scale_with_prefix() {
        // 2 bits of "1", then ceil(3 * 2) = 6 bits of "0", then ceil(0.5 * 8) = 4 of "1".
        let p: BlockProgram = "(1)x(2);(0)x(*3);(1)x(*0.5)".parse().unwrap();
        assert_eq!(p.prefix(12), bits("110000001111"));
        assert_eq!(p.explicit_len(), 12);
    }

    #[test]
    fn zero_count_blocks_are_skipped() {
        let p: BlockProgram = "(1)x(0);(01)x(1)".parse().unwrap();
        assert_eq!(p.prefix(4), bits("0101"));
    }

    #[test]
    fn text_form_round_trips() {
        for text in ["(0)x(4);(01)x(2)", "(0)x(64);(01)x(*4);...", "(001)x(3)@32"] {
            let p: BlockProgram = text.parse().unwrap();
            assert_eq!(p.to_string(), text);
            assert_eq!(p.to_string().parse::<BlockProgram>().unwrap(), p);
        }
    }

    #[test]
    fn malformed_programs_rejected() {
        for text in ["", "(0)x4", "(2)x(1)", "()x(1)", "(0)x(1)@99", "...;(0)x(1)", "(0)x(0);..."] {
            assert!(text.parse::<BlockProgram>().is_err(), "{text}");
        }
    }

    #[test]
    fn random_stream_is_seeded() {
        let a = BitSource::Random { seed: 1, precision: 53 };
        let mut s1 = a.stream();
        let mut s2 = a.stream();
        let x: Vec<bool> = (0..200).map(|_| s1.next_bit()).collect();
        let y: Vec<bool> = (0..200).map(|_| s2.next_bit()).collect();
        assert_eq!(x, y);
        let ones = x.iter().filter(|&&b| b).count();
        assert!(ones > 60 && ones < 140);
    }

    #[test]
    fn bits_to_point_is_binary_fraction() {
        assert_eq!(bits_to_point(&bits("1")), 0.5);
        assert_eq!(bits_to_point(&bits("0101")), 0.3125);
    }
}
