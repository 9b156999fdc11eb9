use weakcde_core::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use weakcde_core::cde::{
    cde_check, common_average, homomesy_check, mcde_scan, tcde_check, theorem_instance, TcdeOutcome,
    ToggleSymmetricSampler,
};
use weakcde_core::lattice::{expectation, maximal_chain_count, order_of};
use weakcde_core::perm::Permutation;
use weakcde_core::rook::{theorem_certificate, verify_rooks, RookTally};
use weakcde_core::shape::{
    connected_components, enumerate_balanced, is_balanced, match_skew_shape, rothe_diagram, skew_vexillary_shape,
    CensusCounts,
};

use crate::output::{dot, frac, Outcome, Table};
use crate::target::Poset;

/// Independent stream for item `index` under `seed`, so results do not depend
/// on scheduling.
fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn classify(w: &Permutation) -> Outcome {
    let c = w.classify();
    let shape = skew_vexillary_shape(w);
    let connected = shape.as_ref().is_some_and(|s| s.size() > 0 && s.is_connected());
    let balanced = connected && shape.as_ref().is_some_and(|s| is_balanced(s) == Ok(true));
    let classes = [
        ("grassmannian", c.grassmannian),
        ("inverse_grassmannian", c.inverse_grassmannian),
        ("dominant", c.dominant),
        ("vexillary", c.vexillary),
        ("fully_commutative", c.fully_commutative),
        ("skew_vexillary", shape.is_some()),
        ("balanced", balanced),
    ];
    // shapes of the connected pieces of the Rothe diagram
    let components: Vec<Option<String>> = connected_components(&rothe_diagram(w))
        .iter()
        .map(|d| match_skew_shape(d).map(|m| m.shape.to_string()))
        .collect();
    let mut json = json!({
        "w": w.to_compact_string(),
        "n": w.n(),
        "length": w.length(),
        "shape": shape.as_ref().map(|s| s.to_string()),
        "components": components,
    });
    for (k, v) in classes {
        json[k] = json!(v);
    }
    let mut rows: Vec<(String, String)> = vec![
        ("w".into(), w.to_compact_string()),
        ("length".into(), w.length().to_string()),
        ("shape".into(), shape.map_or("-".into(), |s| s.to_string())),
    ];
    rows.extend(classes.iter().map(|&(k, v)| (k.to_string(), v.to_string())));
    let pieces: Vec<String> = components.iter().map(|c| c.clone().unwrap_or_else(|| "-".into())).collect();
    rows.push(("components".into(), pieces.join(" ")));
    Outcome::new(json, Table::pairs(rows))
}

pub fn census(n: usize) -> Outcome {
    let counts = Permutation::all(n)
        .par_bridge()
        .fold(CensusCounts::default, |mut acc, w| {
            acc.add(&w);
            acc
        })
        .reduce(CensusCounts::default, CensusCounts::merge);
    let counts = CensusCounts { n, ..counts };
    let fields = [
        ("total", counts.total),
        ("skew_vexillary", counts.skew_vexillary),
        ("vexillary", counts.vexillary),
        ("dominant", counts.dominant),
        ("grassmannian", counts.grassmannian),
        ("inverse_grassmannian", counts.inverse_grassmannian),
        ("fully_commutative", counts.fully_commutative),
        ("balanced", counts.balanced),
    ];
    let mut json = json!({ "n": n });
    for (k, v) in fields {
        json[k] = json!(v);
    }
    Outcome::new(json, Table::pairs(fields.iter().map(|&(k, v)| (k, v.to_string()))))
}

pub fn interval(poset: &Poset) -> Outcome {
    let g = poset.graph();
    let report = cde_check(g);
    let chains = maximal_chain_count(g);
    let irreducibles: Vec<String> = poset.gamma().irreducibles().iter().map(|&p| poset.irreducible(p)).collect();
    let json = json!({
        "target": poset.name(),
        "kind": poset.kind(),
        "elements": g.len(),
        "edges": g.edge_count(),
        "rank": poset.rank(g.top()),
        "maximal_chains": chains.to_string(),
        "irreducibles": irreducibles,
        "edge_density": frac(&report.edge_density),
    });
    let table = Table::pairs([
        ("target", poset.name()),
        ("elements", g.len().to_string()),
        ("edges", g.edge_count().to_string()),
        ("rank", poset.rank(g.top()).to_string()),
        ("maximal_chains", chains.to_string()),
        ("irreducibles", irreducibles.len().to_string()),
        ("edge_density", frac(&report.edge_density)),
    ]);
    Outcome::new(json, table).with_dot(dot(poset))
}

pub fn cde(poset: &Poset) -> Outcome {
    let r = cde_check(poset.graph());
    let json = json!({
        "target": poset.name(),
        "elements": r.elements,
        "edges": r.edges,
        "edge_density": frac(&r.edge_density),
        "uniform_expectation": frac(&r.uniform_expectation),
        "maxchain_expectation": frac(&r.maxchain_expectation),
        "cde": r.is_cde,
    });
    let table = Table::pairs([
        ("target", poset.name()),
        ("elements", r.elements.to_string()),
        ("edges", r.edges.to_string()),
        ("edge_density", frac(&r.edge_density)),
        ("uniform_expectation", frac(&r.uniform_expectation)),
        ("maxchain_expectation", frac(&r.maxchain_expectation)),
        ("cde", r.is_cde.to_string()),
    ]);
    Outcome::new(json, table)
}

/// Certificate or witness; with `samples > 0`, the certificate's constant is
/// also compared against that many sampled toggle-symmetric distributions.
pub fn tcde(poset: &Poset, samples: usize, seed: u64) -> Outcome {
    let gl = poset.gamma();
    match tcde_check(gl) {
        TcdeOutcome::Certificate(c) => {
            let sampler = ToggleSymmetricSampler::new(gl);
            let ddeg = gl.ddeg();
            let mismatches = (0..samples)
                .into_par_iter()
                .filter(|&k| {
                    let mu = sampler.sample(&mut rng_for(seed, k as u64));
                    expectation(&mu, &ddeg).unwrap() != c.constant
                })
                .count();
            let coeffs: Vec<Value> = c
                .coeffs
                .iter()
                .map(|(&p, a)| json!({ "irreducible": poset.irreducible(p), "coefficient": frac(a) }))
                .collect();
            let verified = c.verify(gl);
            let json = json!({
                "target": poset.name(),
                "tcde": true,
                "density": frac(&c.constant),
                "certificate": { "constant": frac(&c.constant), "coefficients": coeffs, "verified": verified },
                "dimension": sampler.dimension(),
                "samples": samples,
                "sample_mismatches": mismatches,
            });
            let mut table = Table::new(["term", "coefficient"]);
            table.row(["1".to_string(), frac(&c.constant)]);
            for (&p, a) in &c.coeffs {
                table.row([format!("T[{}]", poset.irreducible(p)), frac(a)]);
            }
            Outcome::new(json, table).violated(!verified || mismatches > 0)
        }
        TcdeOutcome::Witness(w) => {
            let weights: Vec<Value> = w
                .distribution
                .weights()
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(y, x)| json!({ "element": poset.element(y), "weight": frac(x) }))
                .collect();
            let json = json!({
                "target": poset.name(),
                "tcde": false,
                "density": frac(&w.density),
                "witness": { "expectation": frac(&w.expectation), "distribution": weights },
            });
            let mut table = Table::new(["element", "weight"]);
            for (y, x) in w.distribution.weights().iter().enumerate() {
                table.row([poset.element(y), frac(x)]);
            }
            Outcome::new(json, table)
        }
    }
}

pub fn mcde(poset: &Poset, m_max: usize) -> Outcome {
    let scan = mcde_scan(poset.graph(), m_max);
    let json = json!({
        "target": poset.name(),
        "values": scan.values.iter().map(frac).collect::<Vec<_>>(),
        "first_difference": scan.first_difference,
        "constant": scan.is_constant(),
    });
    let mut table = Table::new(["m", "expectation"]);
    for (m, v) in scan.values.iter().enumerate() {
        table.row([m.to_string(), frac(v)]);
    }
    Outcome::new(json, table)
}

pub fn rowmotion(poset: &Poset) -> Outcome {
    let gl = poset.gamma();
    let orbits = gl.rowmotion_orbits().expect("semidistributive lattices have rowmotion");
    let order: BigUint = order_of(&orbits);
    let averages = homomesy_check(gl, &gl.ddeg()).unwrap();
    let common = common_average(&averages);
    let rows: Vec<Value> = averages
        .iter()
        .map(|o| json!({ "representative": poset.element(o.representative), "size": o.size, "ddeg_average": frac(&o.average) }))
        .collect();
    let json = json!({
        "target": poset.name(),
        "orbits": rows,
        "orbit_count": orbits.len(),
        "order": order.to_string(),
        "homomesic": common.is_some(),
        "ddeg_average": common.as_ref().map(frac),
    });
    let mut table = Table::new(["representative", "size", "ddeg_average"]);
    for o in &averages {
        table.row([poset.element(o.representative), o.size.to_string(), frac(&o.average)]);
    }
    Outcome::new(json, table)
}

fn tally_json(t: &RookTally) -> Value {
    json!({
        "anchors": t.anchors,
        "evaluations": t.evaluations,
        "failures": t.failures,
        "mismatched_terms": t.mismatched_terms,
    })
}

pub fn rook_verify(perms: Vec<Permutation>, label: String) -> Outcome {
    let tally = perms
        .par_iter()
        .map(|w| verify_rooks(w, true))
        .reduce(RookTally::default, RookTally::merge);
    let mut json = tally_json(&tally);
    json["target"] = json!(label);
    let table = Table::pairs([
        ("target", label),
        ("anchors", tally.anchors.to_string()),
        ("evaluations", tally.evaluations.to_string()),
        ("failures", tally.failures.to_string()),
        ("mismatched_terms", tally.mismatched_terms.to_string()),
    ]);
    Outcome::new(json, table).violated(tally.failures > 0 || tally.mismatched_terms > 0)
}

/// Every skew vexillary `w ∈ Sₙ` of connected balanced shape, in lexicographic
/// order. With `samples > 0` the rook certificate is built as well.
pub fn theorem(n: usize, samples: usize, seed: u64) -> Outcome {
    let perms: Vec<Permutation> = Permutation::all(n).collect();
    let total = perms.len();
    let results: Vec<(usize, _, Option<Result<usize, String>>)> = perms
        .par_iter()
        .enumerate()
        .filter_map(|(k, w)| {
            let rec = theorem_instance(w)?;
            let cert = (samples > 0).then(|| {
                theorem_certificate(w, samples, &mut rng_for(seed, k as u64))
                    .map(|c| c.distributions_checked)
                    .map_err(|e| e.to_string())
            });
            Some((k, rec, cert))
        })
        .collect();
    let mut table = Table::new([
        "w", "shape", "a", "b", "elements", "edges", "density", "expected", "tcde", "cde", "certificate", "holds",
    ]);
    let mut instances = Vec::new();
    let mut violations = Vec::new();
    for (_, r, cert) in &results {
        let cert_ok = cert.as_ref().is_none_or(|c| c.is_ok());
        let holds = r.holds() && cert_ok;
        if !holds {
            violations.push(r.w.to_compact_string());
        }
        let cert_cell = match cert {
            None => "-".to_string(),
            Some(Ok(k)) => format!("ok({})", k),
            Some(Err(e)) => e.clone(),
        };
        table.row([
            r.w.to_compact_string(),
            r.shape.to_string(),
            r.a.to_string(),
            r.b.to_string(),
            r.elements.to_string(),
            r.edges.to_string(),
            frac(&r.density),
            frac(&r.expected),
            r.tcde.as_ref().map_or("-".to_string(), frac),
            r.cde.to_string(),
            cert_cell,
            holds.to_string(),
        ]);
        instances.push(json!({
            "w": r.w.to_compact_string(),
            "shape": r.shape.to_string(),
            "a": r.a,
            "b": r.b,
            "elements": r.elements,
            "edges": r.edges,
            "density": frac(&r.density),
            "expected": frac(&r.expected),
            "tcde": r.tcde.as_ref().map(frac),
            "cde": r.cde,
            "certificate_distributions": cert.as_ref().and_then(|c| c.as_ref().ok()),
            "holds": holds,
        }));
    }
    let json = json!({
        "n": n,
        "total": total,
        "instances": instances.len(),
        "violations": violations,
        "records": instances,
    });
    Outcome::new(json, table).violated(!violations.is_empty())
}

pub fn balanced(a: u32, b: u32) -> Outcome {
    let shapes = enumerate_balanced(a, b);
    let g = a.gcd(&b);
    let expected = 3usize.pow(g - 1);
    let expected_straight = 2usize.pow(g - 1);
    let straight = shapes.iter().filter(|s| s.is_straight()).count();
    let ok = shapes.len() == expected && straight == expected_straight;
    let json = json!({
        "a": a,
        "b": b,
        "count": shapes.len(),
        "expected": expected,
        "straight": straight,
        "expected_straight": expected_straight,
        "shapes": shapes.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "ok": ok,
    });
    let mut table = Table::new(["shape", "straight"]);
    for s in &shapes {
        table.row([s.to_string(), s.is_straight().to_string()]);
    }
    Outcome::new(json, table).violated(!ok)
}

pub fn export(poset: &Poset) -> Outcome {
    let json = json!({
        "target": poset.name(),
        "nodes": (0..poset.graph().len()).map(|x| json!({ "id": x, "label": poset.element(x), "rank": poset.rank(x) })).collect::<Vec<_>>(),
        "edges": poset.graph().edges().map(|(x, y)| json!({ "lower": x, "upper": y, "label": poset.edge_label(x, y) })).collect::<Vec<_>>(),
    });
    let mut table = Table::new(["lower", "upper", "label"]);
    for (x, y) in poset.graph().edges() {
        table.row([poset.element(x), poset.element(y), poset.edge_label(x, y)]);
    }
    Outcome::new(json, table).with_dot(dot(poset))
}
