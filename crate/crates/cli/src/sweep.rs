use stabrepair::bribery::solve_bipartite;
use stabrepair::extension::{extend_ranks, extend_ranks_lb, red_blue_cover, DEFAULT_RED_CAP};
use stabrepair::oracle::random::{
    random_bribery_problem, random_cnf, random_extension_problem, random_roommates, seeded, BriberyShape,
    ExtensionShape,
};
use stabrepair::oracle::{
    bribery_bruteforce, extension_bruteforce, find_stable_q_matching, gen_red_blue_from_3sat,
    min_removable_bruteforce, sat_bruteforce, BRIBERY_CAP, EXTENSION_CAP, MIN_REMOVABLE_CAP, SAT_CAP,
};
use stabrepair::partition::{min_removable_set, stable_partition};
use stabrepair::RankBounds;

use crate::Report;

const TOL: f64 = 1e-6;

#[derive(Default)]
struct Tally {
    run: usize,
    skipped: usize,
    failures: Vec<usize>,
}

impl Tally {
    /// `Some(agree)` for a compared instance, `None` when an oracle cap was hit.
    fn record(&mut self, i: usize, outcome: Option<bool>) {
        match outcome {
            Some(true) => self.run += 1,
            Some(false) => {
                self.run += 1;
                self.failures.push(i);
            }
            None => self.skipped += 1,
        }
    }
}

/// Runs every solver against its brute-force counterpart on `count` random
/// instances per family.
pub fn sweep(seed: u64, count: usize) -> Report {
    let mut families: Vec<(&'static str, Tally)> = Vec::new();

    let mut t = Tally::default();
    let mut rng = seeded(seed);
    for i in 0..count {
        let (g, o) = random_roommates(&mut rng, 1 + i % 8, 0.5);
        let outcome = (|| {
            let sp = stable_partition(&g, &o).ok()?;
            let found = find_stable_q_matching(&g, &o).ok()?;
            let removed = min_removable_set(&g, &o).ok()?.removed.len();
            let brute = min_removable_bruteforce(&g, &o, MIN_REMOVABLE_CAP).ok()?.len();
            Some(sp.odd_cycles.is_empty() == found.is_some() && removed == brute)
        })();
        t.record(i, outcome);
    }
    families.push(("deletion", t));

    let mut t = Tally::default();
    let mut rng = seeded(seed.wrapping_add(1));
    for i in 0..count {
        let prob = random_bribery_problem(&mut rng, &BriberyShape::default());
        let outcome = match (solve_bipartite(&prob), bribery_bruteforce(&prob, BRIBERY_CAP)) {
            (Ok(a), Ok(b)) => Some((a.cost - b.cost).abs() <= TOL * (1.0 + b.cost)),
            (Err(_), Err(stabrepair::oracle::OracleError::CapExceeded { .. })) => None,
            (Err(_), Err(_)) => Some(true),
            _ => Some(false),
        };
        t.record(i, outcome);
    }
    families.push(("bribery", t));

    let mut t = Tally::default();
    let mut rng = seeded(seed.wrapping_add(2));
    for i in 0..count {
        let shape = ExtensionShape { bounds: i % 2 == 1, ..ExtensionShape::default() };
        let mut ep = random_extension_problem(&mut rng, &shape);
        if ep.lower.is_none() && i % 2 == 1 {
            ep.lower = Some(RankBounds::trivial(&ep.graph));
        }
        let outcome = (|| {
            let fast = if ep.lower.is_some() { extend_ranks_lb(&ep) } else { extend_ranks(&ep) }.ok()?;
            let brute = extension_bruteforce(&ep, EXTENSION_CAP).ok()?;
            Some(fast.is_some() == brute.is_some() && fast.is_none_or(|r| ep.accepts(&r)))
        })();
        t.record(i, outcome);
    }
    families.push(("extension", t));

    let mut t = Tally::default();
    let mut rng = seeded(seed.wrapping_add(3));
    for i in 0..count {
        let vars = 1 + i % 5;
        let f = random_cnf(&mut rng, vars, 1 + i % 7);
        let rb = gen_red_blue_from_3sat(&f);
        let outcome = (|| {
            let cover = red_blue_cover(&rb, DEFAULT_RED_CAP).ok()?;
            let sat = sat_bruteforce(&f, SAT_CAP).ok()?;
            Some(cover.is_some() == sat && cover.is_none_or(|m| rb.is_cover(&m)))
        })();
        t.record(i, outcome);
    }
    families.push(("redblue", t));

    let mut r = Report::new("sweep");
    r.both("seed", seed.to_string(), seed);
    r.both("count", count.to_string(), count);
    let mut summary = serde_json::Map::new();
    for (name, t) in &families {
        r.line(
            name,
            format!("{} compared, {} skipped, {} disagreements", t.run, t.skipped, t.failures.len()),
        );
        summary.insert(
            (*name).into(),
            serde_json::json!({ "compared": t.run, "skipped": t.skipped, "disagreements": t.failures }),
        );
        if !t.failures.is_empty() {
            r.no();
        }
    }
    r.field("families", summary);
    r
}
