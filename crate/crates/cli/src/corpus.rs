//! Re-derivation of every catalogued mask from its construction problem.

use std::path::Path;

use anyhow::Result;
use dualsub::catalog;
use dualsub::charax::verify_dual_interpolatory;
use dualsub::construct::{derive, ConstructionProblem, Derivation};
use dualsub::io::write_json;
use dualsub::samples::{cantor_samples, dd_samples, mix_samples};
use dualsub::{rat, Mask, SampleSet};
use rayon::prelude::*;

pub struct Entry {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

enum Expect {
    Unique(Mask),
    Infeasible,
    /// Family of the given dimension containing every listed mask.
    Family(usize, Vec<Mask>),
}

struct Case {
    name: String,
    problem: ConstructionProblem,
    expect: Expect,
}

fn cases() -> Vec<Case> {
    let dd4 = dd_samples(2);
    let problem =
        |m, d, k, s: &SampleSet| ConstructionProblem::new(m, d, k, s.clone(), true).expect("valid corpus problem");
    let mut out = vec![
        Case {
            name: "cantor".into(),
            problem: problem(3, 1, 2, &cantor_samples()),
            expect: Expect::Unique(catalog::cantor_mask()),
        },
        Case {
            name: "ternary".into(),
            problem: problem(3, 4, 7, &dd4),
            expect: Expect::Unique(catalog::ternary_mask()),
        },
        Case {
            name: "ternary-k5".into(),
            problem: problem(3, 4, 5, &dd4),
            expect: Expect::Infeasible,
        },
        Case {
            name: "ternary-k6".into(),
            problem: problem(3, 4, 6, &dd4),
            expect: Expect::Infeasible,
        },
        Case {
            name: "quinary".into(),
            problem: problem(5, 3, 10, &dd4),
            expect: Expect::Family(
                1,
                [rat(0, 1), rat(-7, 5), rat(10, 1)]
                    .iter()
                    .map(catalog::quinary_mask)
                    .collect(),
            ),
        },
    ];
    for (label, w) in [("0", rat(0, 1)), ("1/2", rat(1, 2)), ("1", rat(1, 1))] {
        let s = mix_samples(&dd4, &dd_samples(3), &w).expect("same lattice");
        let (v, u) = catalog::quaternary_cubic_params(&w);
        let mut members = vec![catalog::quaternary_mask(&w, &v, &u)];
        if w == rat(1, 1) {
            members.push(catalog::quaternary_quartic_mask());
        }
        out.push(Case {
            name: format!("quaternary-w{label}"),
            problem: problem(4, 3, 11, &s),
            expect: Expect::Family(2, members),
        });
    }
    out
}

fn dual_ok(mask: &Mask, s: &SampleSet) -> bool {
    verify_dual_interpolatory(mask, s).is_ok_and(|r| r.satisfied)
}

fn check(case: &Case, emit: Option<&Path>) -> Result<Entry> {
    let derived = derive(&case.problem)?;
    let samples = case.problem.samples();
    let file = |suffix: &str| emit.map(|d| d.join(format!("{}{suffix}.json", case.name.replace('/', "_"))));
    let (passed, detail) = match (&case.expect, &derived) {
        (Expect::Unique(want), Derivation::UniqueMask(got)) => {
            if let Some(p) = file("") {
                write_json(p, got)?;
            }
            let same = got == want;
            let ok = same && dual_ok(got, samples);
            (
                ok,
                if same {
                    "unique mask, exact match".to_string()
                } else {
                    "unique mask differs".to_string()
                },
            )
        }
        (Expect::Infeasible, Derivation::Infeasible) => (true, "infeasible".to_string()),
        (Expect::Family(dim, members), Derivation::Family(f)) => {
            if let Some(p) = file("-family") {
                write_json(p, f)?;
            }
            let inside = members.iter().filter(|a| f.is_member(a) && dual_ok(a, samples)).count();
            (
                f.dimension() == *dim && inside == members.len(),
                format!("dimension {}, {inside}/{} members", f.dimension(), members.len()),
            )
        }
        (_, other) => (false, format!("unexpected outcome: {}", describe(other))),
    };
    Ok(Entry {
        name: case.name.clone(),
        passed,
        detail,
    })
}

fn describe(d: &Derivation) -> String {
    match d {
        Derivation::Infeasible => "infeasible".into(),
        Derivation::UniqueMask(_) => "unique mask".into(),
        Derivation::Family(f) => format!("family of dimension {}", f.dimension()),
    }
}

/// Results in a fixed order regardless of thread count.
pub fn run(emit: Option<&Path>) -> Result<Vec<Entry>> {
    if let Some(dir) = emit {
        std::fs::create_dir_all(dir)?;
        write_json(dir.join("cantor_samples.json"), &cantor_samples())?;
    }
    cases().par_iter().map(|c| check(c, emit)).collect()
}
