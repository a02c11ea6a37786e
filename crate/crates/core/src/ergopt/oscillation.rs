use super::PeriodicOrbit;
use crate::systems::{Block, BlockProgram, Repetition, DEFAULT_PRECISION};
use crate::{Error, Result};

pub const DEFAULT_GROWTH: f64 = 4.0;
/// Length of the opening block before rounding to the target period.
pub const FIRST_BLOCK_BITS: u64 = 64;

fn round_up(n: u64, p: u64) -> u64 {
    n.div_ceil(p) * p
}

/// A symbolic program that shadows the targets in turn with geometrically
/// growing blocks: block `k + 1` has `ceil(growth * S_k)` bits rounded up to
/// a whole number of periods, where `S_k` is the length of everything
/// before it. The program stops at `total_bits`, keeping whole periods
/// only in the final block, and afterwards repeats the last word.
pub fn construct_oscillating_orbit(targets: &[PeriodicOrbit], growth: f64, total_bits: u64) -> Result<BlockProgram> {
    if targets.is_empty() {
        return Err(Error::config("at least one target orbit is required"));
    }
    if !(growth > 1.0 && growth.is_finite()) {
        return Err(Error::config(format!("growth ratio {growth} must exceed 1")));
    }
    let words = targets
        .iter()
        .map(|t| t.itinerary.clone().ok_or_else(|| Error::unsupported("targets must be doubling orbits")))
        .collect::<Result<Vec<_>>>()?;

    let mut blocks = Vec::new();
    let mut used = 0u64;
    for k in 0.. {
        let word = &words[k % words.len()];
        let p = word.len() as u64;
        let wanted = if k == 0 { FIRST_BLOCK_BITS } else { (growth * used as f64).ceil() as u64 };
        let len = round_up(wanted.max(1), p);
        let truncated = used + len > total_bits;
        let len = if truncated {
            if k < words.len() {
                return Err(Error::budget(format!(
                    "{total_bits} bits cannot hold one full cycle through {} targets",
                    words.len()
                )));
            }
            (total_bits - used) / p * p
        } else {
            len
        };
        if len > 0 {
            blocks.push(Block::count(word.clone(), len / p));
            used += len;
        }
        if truncated || used >= total_bits {
            break;
        }
    }
    BlockProgram::new(blocks, false, DEFAULT_PRECISION)
}

/// Cumulative bit counts at the end of each explicit block.
pub fn block_ends(program: &BlockProgram) -> Vec<u64> {
    let mut total = 0u64;
    program
        .blocks
        .iter()
        .map(|b| {
            let reps = match b.repetition {
                Repetition::Count(c) => c,
                Repetition::Grow(r) => ((r * total as f64).ceil() as u64).div_ceil(b.word.len() as u64).max(1),
            };
            total += reps * b.word.len() as u64;
            total
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ergopt::enumerate_periodic_orbits;
    use crate::orbitstats::{birkhoff_series, Observable, Schedule};
    use crate::systems::{BitSource, Point, System};

    fn targets(words: &[&str]) -> Vec<PeriodicOrbit> {
        let all = enumerate_periodic_orbits(&System::doubling(), 4).unwrap();
        words
            .iter()
            .map(|w| all.iter().find(|o| o.itinerary.as_ref().unwrap().to_string() == *w).unwrap().clone())
            .collect()
    }

    #[test]
    fn single_fixed_point_gives_zero_sequence() {
        let prog = construct_oscillating_orbit(&targets(&["0"]), 4.0, 10_000).unwrap();
        assert!(prog.prefix(20_000).iter().all(|&b| !b));
        assert_eq!(block_ends(&prog).last(), Some(&10_000));
    }

    #[test]
    fn block_lengths_follow_growth_rule() {
        let prog = construct_oscillating_orbit(&targets(&["0", "01"]), 4.0, 1_000_000).unwrap();
        let ends = block_ends(&prog);
        assert_eq!(&ends[..6], &[64, 320, 1600, 8000, 40_000, 200_000]);
        assert_eq!(*ends.last().unwrap(), 1_000_000);
        assert!(construct_oscillating_orbit(&targets(&["0", "01"]), 4.0, 100).is_err());
    }

    /// Oracle: the running average at a block end, from exact per-block
    /// orbit averages and lengths. Returns `(n, average)` pairs.
    fn recursion_oracle(lengths: &[(u64, f64)]) -> Vec<(u64, f64)> {
        let mut n = 0u64;
        let mut acc = 0.0;
        lengths
            .iter()
            .map(|&(len, avg)| {
                acc += len as f64 * avg;
                n += len;
                (n, acc / n as f64)
            })
            .collect()
    }

    #[test]
    fn block_end_averages_match_recursion() {
        let tg = targets(&["0", "01"]);
        let phi = Observable::cos(1);
        let avgs: Vec<f64> = tg.iter().map(|t| t.average(|p| phi.eval(p))).collect();
        assert_eq!(avgs[0], 1.0);
        assert!((avgs[1] - 0.25).abs() < 1e-15);
        let prog = construct_oscillating_orbit(&tg, 4.0, 1_000_000).unwrap();
        let ends = block_ends(&prog);
        let mut prev = 0;
        let lens: Vec<(u64, f64)> = ends
            .iter()
            .enumerate()
            .map(|(k, &e)| {
                let l = e - prev;
                prev = e;
                (l, avgs[k % 2])
            })
            .collect();
        let oracle = recursion_oracle(&lens);
        let system = System::symbolic(BitSource::Program(prog)).unwrap();
        let schedule = Schedule { ratio: 1.05, tail_start: Some(1) };
        let report = birkhoff_series(&system, Point::default(), |p| phi.eval(p), 1_000_000, &schedule).unwrap();
        // Sample the running average exactly at block ends via a dense
        // orbit pass.
        let mut sum = 0.0;
        let mut it = system.iter_orbit(Point::default()).unwrap();
        let mut i = 0u64;
        for &(n, expected) in &oracle {
            while i < n {
                sum += phi.eval(it.next().unwrap());
                i += 1;
            }
            // Only the 53-bit window straddling a block boundary differs
            // from the ideal target orbit.
            let tol = 2.0 * 53.0 * (ends.len() as f64) / n as f64;
            assert!((sum / n as f64 - expected).abs() <= tol, "n = {n}");
        }
        // Block-end guarantee: within range / growth + p_max / L_k of the
        // block's target average (range of phi is 1, p_max is 2).
        let mut prev = 0;
        for (k, (&(n, avg), &(len, target))) in oracle.iter().zip(&lens).enumerate() {
            if k > 0 && len == ends[k] - prev {
                assert!((avg - target).abs() <= 1.0 / 4.0 + 2.0 / len as f64, "block {k}");
            }
            prev = n;
        }
        assert!(report.limsup >= report.liminf);
    }
}
