//! Deterministic test corpora.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::Ctx;
use crate::error::Result;
use crate::ncat::gaunt::is_gaunt;
use crate::ncat::limits::product;
use crate::ncat::standard::{boundary, cell, delta, suspension, walking_iso};
use crate::ncat::{build_from_keys, validate, NCat};
use crate::presheaf::TestObj;
use crate::theta::theta_enumerate_objects;

/// A named corpus object.
#[derive(Debug, Clone)]
pub struct Specimen {
    pub name: String,
    pub object: NCat,
}

/// Default size bound, in nodes, of the Θ objects realized into the corpus.
pub const THETA_CORPUS_SIZE: usize = 4;

/// Cells, boundaries, `E` and `σE`, `Δ^[2]`, `C_1 × C_1`, realizations of
/// Θ_n objects with at most `theta_size` nodes, and `random` seeded random posets (suspended when there
/// is room), all checked by `validate`.
pub fn corpus_generate(n: usize, seed: u64, random: usize, theta_size: usize) -> Result<Vec<Specimen>> {
    let mut out = Vec::new();
    let mut push = |name: String, object: NCat| {
        if validate(&object).is_valid() && !out.iter().any(|s: &Specimen| s.object == object) {
            out.push(Specimen { name, object });
        }
    };
    for k in 0..=n {
        push(format!("C_{k}"), cell(k, n)?);
    }
    for k in 1..=n {
        push(format!("boundary C_{k}"), boundary(k, n)?);
    }
    push("E".into(), walking_iso(n)?);
    if n >= 2 {
        push("suspended E".into(), suspension(&walking_iso(n)?)?);
    }
    push("Δ[2]".into(), delta(2, n)?);
    let c1 = cell(1, n)?;
    push("C_1 × C_1".into(), product(&c1, &c1)?.object);
    for o in theta_enumerate_objects(n, theta_size) {
        let o = o.raised(n)?;
        push(format!("Θ {o}"), TestObj::Theta(o).realize(n)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for r in 0..random {
        let poset = random_poset(&mut rng, n)?;
        if n >= 2 && rng.gen_bool(0.5) {
            push(format!("random {r} suspended"), suspension(&poset)?);
        } else {
            push(format!("random {r}"), poset);
        }
    }
    Ok(out)
}

/// The gaunt members of a corpus.
pub fn gaunt_part(corpus: &[Specimen], ctx: &Ctx) -> Result<Vec<Specimen>> {
    let mut out = Vec::new();
    for s in corpus {
        if is_gaunt(&s.object, ctx)?.gaunt {
            out.push(s.clone());
        }
    }
    Ok(out)
}

/// A random partial order on at most four points, as a 1-category.
fn random_poset(rng: &mut ChaCha8Rng, n: usize) -> Result<NCat> {
    let size = rng.gen_range(2..=4usize);
    let mut below = vec![vec![false; size]; size];
    for (a, row) in below.iter_mut().enumerate() {
        row[a] = true;
        for b in a + 1..size {
            row[b] = rng.gen_bool(0.5);
        }
    }
    for k in 0..size {
        for a in 0..size {
            for b in 0..size {
                if below[a][k] && below[k][b] {
                    below[a][b] = true;
                }
            }
        }
    }
    let mut keys: Vec<(usize, usize)> =
        (0..size).flat_map(|a| (0..size).map(move |b| (a, b))).filter(|&(a, b)| below[a][b]).collect();
    keys.sort_by_key(|&(a, b)| (a != b, a, b));
    let (x, _) = build_from_keys(
        n.max(1),
        &keys,
        |&(a, b)| if a == b { format!("p{a}") } else { format!("p{a}-p{b}") },
        |i, &(a, b)| if i == 1 { (a, a) } else { (a, b) },
        |i, &(a, b)| if i == 1 { (b, b) } else { (a, b) },
        |i, &(b, c), &(a, b2)| {
            if i == 1 {
                (b == b2).then_some((a, c))
            } else {
                ((b, c) == (a, b2)).then_some((b, c))
            }
        },
    )?;
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_corpus_contents() {
        let ctx = Ctx::default();
        let corpus = corpus_generate(2, 7, 4, THETA_CORPUS_SIZE).unwrap();
        for name in ["C_0", "C_1", "C_2", "boundary C_2", "E", "suspended E", "Δ[2]", "C_1 × C_1"] {
            assert!(corpus.iter().any(|s| s.name == name), "{name} missing");
        }
        assert!(corpus.iter().all(|s| validate(&s.object).is_valid()));
        let gaunt = gaunt_part(&corpus, &ctx).unwrap();
        assert!(gaunt.iter().all(|s| s.name != "E" && s.name != "suspended E"));
        let again = corpus_generate(2, 7, 4, THETA_CORPUS_SIZE).unwrap();
        assert_eq!(corpus.len(), again.len());
        assert!(corpus.iter().zip(&again).all(|(a, b)| a.object == b.object));
    }
}
