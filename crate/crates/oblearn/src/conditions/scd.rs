//! Single-crossing differences: the utility difference of every action
//! pair may switch strict sign at most once across the ordered states.
//! Runs of zeros never count as a crossing.

use serde_json::json;

use crate::conditions::{CheckReport, Verdict};
use crate::model::UtilityTable;

/// Sign-pattern check over every action pair.
///
/// Fails exactly when some pair's difference runs strictly positive →
/// strictly negative → strictly positive over increasing states, or the
/// mirror image; the witness is that state triple.
pub fn check_scd(u: &UtilityTable) -> CheckReport {
    let n_actions = u.action_count();
    for a in 0..n_actions {
        for b in (a + 1)..n_actions {
            let diff = u.difference(a, b);
            // compress to the strict-sign subsequence, remembering indices
            let mut signs: Vec<(usize, i8)> = Vec::new();
            for (i, &d) in diff.iter().enumerate() {
                let s = if d > 0.0 {
                    1
                } else if d < 0.0 {
                    -1
                } else {
                    continue;
                };
                if signs.last().map(|&(_, ls)| ls) != Some(s) {
                    signs.push((i, s));
                }
            }
            if signs.len() >= 3 {
                // locate the first alternation triple
                let (i1, _) = signs[0];
                let (i2, _) = signs[1];
                let (i3, _) = signs[2];
                let sp = u.space();
                return CheckReport::new(
                    "scd",
                    Verdict::Fails,
                    json!({
                        "pair": [u.action_label(a), u.action_label(b)],
                        "states": [sp.state(i1), sp.state(i2), sp.state(i3)],
                        "differences": [diff[i1], diff[i2], diff[i3]],
                    }),
                );
            }
        }
    }
    CheckReport::new(
        "scd",
        Verdict::Holds,
        json!({ "pairs_checked": n_actions * (n_actions - 1) / 2 }),
    )
}

/// Brute-force interval-choice oracle, independent of the sign-pattern
/// scan: over every binary choice set {a, a′} and state triple
/// ω₁ < ω₂ < ω₃, flags a uniquely optimal at the outer states but not
/// optimal in the middle.
pub fn scd_oracle(u: &UtilityTable) -> CheckReport {
    let n_actions = u.action_count();
    let n_states = u.space().len();
    for a in 0..n_actions {
        for b in 0..n_actions {
            if a == b {
                continue;
            }
            // uniquely_opt[w]: a strictly beats b at state w; opt[w]: a weakly optimal
            for i in 0..n_states {
                if !(u.value(a, i) > u.value(b, i)) {
                    continue;
                }
                for k in (i + 2)..n_states {
                    if !(u.value(a, k) > u.value(b, k)) {
                        continue;
                    }
                    for j in (i + 1)..k {
                        if u.value(a, j) < u.value(b, j) {
                            let sp = u.space();
                            return CheckReport::new(
                                "scd_oracle",
                                Verdict::Fails,
                                json!({
                                    "pair": [u.action_label(a), u.action_label(b)],
                                    "states": [sp.state(i), sp.state(j), sp.state(k)],
                                }),
                            );
                        }
                    }
                }
            }
        }
    }
    CheckReport::new("scd_oracle", Verdict::Holds, json!({}))
}
