//! Range checks over many groups at once: strict monotonicity of ψ along the
//! lexicographic order of p-group types, uniqueness of ψ among abelian
//! groups of the same order, orders dividing ψ, and properties of the set of
//! values ψ takes.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::ops::ControlFlow;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::BigNat;
use crate::error::{Error, Result};
use crate::partitions::{lex_iter, Partition};
use crate::psi::{
    group_type_of_order, psi_abelian, psi_cyclic, psi_elem_abelian, psi_p, PGroupType,
};

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainEntry {
    pub partition: Partition,
    pub psi: BigNat,
}

/// Two consecutive chain entries where ψ failed to increase.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub index: usize,
    pub lower: ChainEntry,
    pub upper: ChainEntry,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub n: u32,
    pub p: u64,
    pub chain: Vec<ChainEntry>,
    pub violations: Vec<Violation>,
    /// First entry equals ψ of the elementary abelian group.
    pub min_is_elementary: bool,
    /// Last entry equals ψ of the cyclic group.
    pub max_is_cyclic: bool,
}

impl MonotonicityReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.min_is_elementary && self.max_is_cyclic
    }
}

/// Evaluates ψ over every type of order `pⁿ` in lexicographic order and
/// reports where it fails to strictly increase.
pub fn monotonicity_check(n: u32, p: u64) -> Result<MonotonicityReport> {
    let chain: Vec<ChainEntry> = lex_iter(n)?
        .map(|partition| {
            let psi = psi_p(&PGroupType::new(p, partition.clone())?);
            Ok(ChainEntry { partition, psi })
        })
        .collect::<Result<_>>()?;
    let violations = chain
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0].psi >= w[1].psi)
        .map(|(index, w)| Violation {
            index,
            lower: w[0].clone(),
            upper: w[1].clone(),
        })
        .collect();
    let min_is_elementary = chain.first().map(|e| &e.psi) == Some(&psi_elem_abelian(p, n)?);
    let max_is_cyclic = chain.last().map(|e| &e.psi) == Some(&psi_cyclic(p, n)?);
    Ok(MonotonicityReport {
        n,
        p,
        chain,
        violations,
        min_is_elementary,
        max_is_cyclic,
    })
}

/// Two non-isomorphic groups of the same order with the same ψ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Collision {
    pub order: u64,
    pub first: String,
    pub second: String,
    pub psi: BigNat,
}

/// A group whose order divides ψ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibleHit {
    pub order: u64,
    pub group: String,
    pub psi: BigNat,
    pub quotient: BigNat,
}

/// Resumable state of a sweep over group orders.
///
/// `max_done` is the top of the contiguous range of orders already swept.
/// A checkpoint with no records and `max_done` below the requested start is
/// treated as fresh.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepCheckpoint {
    pub version: u32,
    pub max_done: u64,
    pub collisions: Vec<Collision>,
    pub divisible_hits: Vec<DivisibleHit>,
}

impl Default for SweepCheckpoint {
    fn default() -> Self {
        Self::new()
    }
}

impl SweepCheckpoint {
    pub fn new() -> Self {
        SweepCheckpoint {
            version: CHECKPOINT_VERSION,
            max_done: 1,
            collisions: Vec::new(),
            divisible_hits: Vec::new(),
        }
    }

    fn is_empty(&self) -> bool {
        self.collisions.is_empty() && self.divisible_hits.is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        // Check the version before the full schema so that a future format
        // reports a version error rather than a field error.
        let raw: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::Checkpoint(format!("corrupt checkpoint: {e}")))?;
        match raw.get("version").and_then(serde_json::Value::as_u64) {
            Some(v) if v == u64::from(CHECKPOINT_VERSION) => {}
            Some(v) => {
                return Err(Error::CheckpointVersion {
                    found: u32::try_from(v).unwrap_or(u32::MAX),
                    expected: CHECKPOINT_VERSION,
                })
            }
            None => {
                return Err(Error::Checkpoint(
                    "corrupt checkpoint: missing version".into(),
                ))
            }
        }
        let ckpt: SweepCheckpoint = serde_json::from_value(raw)
            .map_err(|e| Error::Checkpoint(format!("corrupt checkpoint: {e}")))?;
        let sorted = ckpt.collisions.windows(2).all(|w| w[0].order <= w[1].order)
            && ckpt
                .divisible_hits
                .windows(2)
                .all(|w| w[0].order <= w[1].order);
        let in_range = ckpt
            .collisions
            .iter()
            .map(|c| c.order)
            .chain(ckpt.divisible_hits.iter().map(|h| h.order))
            .all(|o| o <= ckpt.max_done);
        if !sorted || !in_range {
            return Err(Error::Checkpoint(
                "corrupt checkpoint: records unsorted or beyond max_done".into(),
            ));
        }
        Ok(ckpt)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    /// Writes to a sibling temporary file, then renames it over `path`.
    pub fn save_atomic(&self, path: &Path) -> Result<()> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = Path::new(&tmp);
        {
            let mut f = fs::File::create(tmp)?;
            f.write_all(self.to_json()?.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(tmp, path)?;
        Ok(())
    }
}

/// Everything a sweep learns about one order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrderOutcome {
    pub order: u64,
    pub collisions: Vec<Collision>,
    pub divisible_hits: Vec<DivisibleHit>,
}

/// ψ of every abelian type of order `n`, in [`group_type_of_order`] order.
pub fn evaluate_order(n: u64) -> Result<Vec<(String, BigNat)>> {
    Ok(group_type_of_order(n)?
        .into_iter()
        .map(|g| {
            let psi = psi_abelian(&g);
            (g.to_string(), psi)
        })
        .collect())
}

/// Collisions and divisibility hits among the types of order `n`.
///
/// Values are compared directly on composite orders rather than per prime,
/// since products of distinct per-prime values could coincide.
pub fn examine_order(n: u64) -> Result<OrderOutcome> {
    let values = evaluate_order(n)?;
    let order = BigNat::from(n);
    let mut by_value: HashMap<&BigNat, Vec<usize>> = HashMap::new();
    for (i, (_, psi)) in values.iter().enumerate() {
        by_value.entry(psi).or_default().push(i);
    }
    let mut collisions = Vec::new();
    for (i, (spec, psi)) in values.iter().enumerate() {
        for &j in &by_value[psi] {
            if j > i {
                collisions.push(Collision {
                    order: n,
                    first: spec.clone(),
                    second: values[j].0.clone(),
                    psi: psi.clone(),
                });
            }
        }
    }
    let divisible_hits = values
        .iter()
        .filter_map(|(spec, psi)| {
            psi.exact_div(&order).map(|quotient| DivisibleHit {
                order: n,
                group: spec.clone(),
                psi: psi.clone(),
                quotient,
            })
        })
        .collect();
    Ok(OrderOutcome {
        order: n,
        collisions,
        divisible_hits,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepOptions {
    /// Worker threads; 1 runs on the calling thread.
    pub workers: usize,
    /// Orders per block. The checkpoint advances one block at a time.
    pub block_size: u64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            workers: 1,
            block_size: 5000,
        }
    }
}

/// Result of a sweep that may have been stopped early.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRun {
    pub checkpoint: SweepCheckpoint,
    pub completed: bool,
}

/// Sweeps orders `from..=to`, looking for same-order collisions of ψ and for
/// orders dividing ψ. Resumes from `checkpoint`; re-running a range the
/// checkpoint already covers returns it unchanged.
pub fn conjecture_sweep(
    from: u64,
    to: u64,
    checkpoint: SweepCheckpoint,
) -> Result<SweepCheckpoint> {
    conjecture_sweep_with(from, to, checkpoint, SweepOptions::default(), |_| {
        Ok(ControlFlow::Continue(()))
    })
    .map(|run| run.checkpoint)
}

/// [`conjecture_sweep`] with parallel workers and a hook that runs after
/// every completed block. The hook sees the advanced checkpoint and may
/// persist it or stop the sweep.
pub fn conjecture_sweep_with<F>(
    from: u64,
    to: u64,
    mut checkpoint: SweepCheckpoint,
    options: SweepOptions,
    mut after_block: F,
) -> Result<SweepRun>
where
    F: FnMut(&SweepCheckpoint) -> Result<ControlFlow<()>>,
{
    if from < 2 || from > to {
        return Err(Error::InvalidArgument(format!(
            "sweep range needs 2 ≤ from ≤ to, got [{from}, {to}]"
        )));
    }
    if checkpoint.version != CHECKPOINT_VERSION {
        return Err(Error::CheckpointVersion {
            found: checkpoint.version,
            expected: CHECKPOINT_VERSION,
        });
    }
    if checkpoint.max_done >= to {
        return Ok(SweepRun {
            checkpoint,
            completed: true,
        });
    }
    let start = if checkpoint.max_done + 1 >= from {
        checkpoint.max_done + 1
    } else if checkpoint.is_empty() {
        from
    } else {
        return Err(Error::Checkpoint(format!(
            "checkpoint ends at {} but the sweep starts at {from}; the range would have a gap",
            checkpoint.max_done
        )));
    };

    let pool = if options.workers > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(options.workers)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("cannot start workers: {e}")))?,
        )
    } else {
        None
    };
    let block = options.block_size.max(1);

    let mut lo = start;
    while lo <= to {
        let hi = to.min(lo.saturating_add(block - 1));
        let outcomes: Vec<OrderOutcome> = match &pool {
            Some(pool) => pool.install(|| {
                (lo..=hi)
                    .into_par_iter()
                    .map(examine_order)
                    .collect::<Result<_>>()
            })?,
            None => (lo..=hi).map(examine_order).collect::<Result<_>>()?,
        };
        for o in outcomes {
            checkpoint.collisions.extend(o.collisions);
            checkpoint.divisible_hits.extend(o.divisible_hits);
        }
        checkpoint.max_done = hi;
        if after_block(&checkpoint)?.is_break() {
            return Ok(SweepRun {
                completed: hi == to,
                checkpoint,
            });
        }
        lo = hi + 1;
    }
    Ok(SweepRun {
        checkpoint,
        completed: true,
    })
}

/// Every abelian group of order at most `max_order` whose order divides ψ.
pub fn divisibility_search(max_order: u64) -> Result<Vec<DivisibleHit>> {
    if max_order < 2 {
        return Err(Error::InvalidArgument(format!(
            "divisibility search needs max_order ≥ 2, got {max_order}"
        )));
    }
    let mut hits = Vec::new();
    for n in 2..=max_order {
        hits.extend(examine_order(n)?.divisible_hits);
    }
    Ok(hits)
}

/// How many smallest image values the report lists.
const LISTED_VALUES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageReport {
    pub max_order: u64,
    pub types_checked: u64,
    pub all_odd: bool,
    /// Groups whose ψ is even, as `(group, ψ)`.
    pub even_values: Vec<(String, BigNat)>,
    /// Whether `ψ(G) ≥ 2|G| − 1` held for every group checked.
    pub lower_bound_holds: bool,
    pub lower_bound_violations: Vec<(String, BigNat)>,
    /// Every value of ψ up to this bound over all finite abelian groups is
    /// attained by some group of order at most `max_order`.
    pub image_complete_up_to: u64,
    /// Smallest distinct values observed that are at most
    /// `image_complete_up_to + 1`, ascending, capped in length.
    pub small_values: Vec<BigNat>,
    pub five_observed: bool,
    /// True when the absence of 5 settles the question for every finite
    /// abelian group.
    pub five_absence_conclusive: bool,
    pub conclusion: String,
}

impl ImageReport {
    pub fn is_clean(&self) -> bool {
        self.all_odd && self.lower_bound_holds && !self.five_observed
    }
}

/// Checks that ψ is odd and at least `2|G| − 1` on every abelian group of
/// order at most `max_order`, and whether ψ ever equals 5.
pub fn image_probe(max_order: u64) -> Result<ImageReport> {
    if max_order < 1 {
        return Err(Error::NonPositive("max_order"));
    }
    let mut types_checked = 0u64;
    let mut even_values = Vec::new();
    let mut lower_bound_violations = Vec::new();
    let mut small: Vec<BigNat> = Vec::new();
    let complete = 2 * max_order;
    let listed_limit = BigNat::from(complete + 1);
    for n in 1..=max_order {
        let bound = BigNat::from(2 * n);
        for (spec, psi) in evaluate_order(n)? {
            types_checked += 1;
            if !psi.is_odd() {
                even_values.push((spec.clone(), psi.clone()));
            }
            if psi.clone() + BigNat::one() < bound {
                lower_bound_violations.push((spec, psi.clone()));
            }
            if psi <= listed_limit {
                small.push(psi);
            }
        }
    }
    small.sort();
    small.dedup();
    let five = BigNat::from(5u64);
    let five_observed = small.contains(&five);
    let bound_ok = lower_bound_violations.is_empty();
    let five_absence_conclusive = !five_observed && bound_ok && complete >= 5;
    let conclusion = if five_observed {
        "5 is a value of psi".to_string()
    } else if five_absence_conclusive {
        format!(
            "5 is not a value of psi for any finite abelian group: groups of order > {max_order} \
             have psi(G) >= 2|G|-1 >= {}, and no group of order <= {max_order} attains 5",
            2 * max_order + 1
        )
    } else {
        format!("5 not observed up to order {max_order}; the range is too small to rule it out")
    };
    small.truncate(LISTED_VALUES);
    Ok(ImageReport {
        max_order,
        types_checked,
        all_odd: even_values.is_empty(),
        even_values,
        lower_bound_holds: bound_ok,
        lower_bound_violations,
        image_complete_up_to: complete,
        small_values: small,
        five_observed,
        five_absence_conclusive,
        conclusion,
    })
}
