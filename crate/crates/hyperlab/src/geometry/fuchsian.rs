//! Fuchsian generators for a surface given by Fenchel–Nielsen coordinates.
//!
//! Each pair of pants carries the group generated by two of its boundary
//! translations (products of seam reflections). Pants are placed in the
//! hyperbolic plane by developing along a spanning tree of the
//! decomposition graph; each non-tree curve contributes one extra gluing
//! generator. Gluing across a curve with twist `theta` identifies the two
//! boundary axes with opposite orientations, the far mark shifted by
//! `theta` along the near side's positive direction.

use crate::hyp::Mat2;

use super::{FnPoint, GeometryError, PantsGeometry};

/// One letter of a word: generator index and exponent sign.
pub type Letter = (usize, i8);
/// A word in the emitted generators.
pub type Word = Vec<Letter>;

/// Length window accepted by the constructive realization.
pub const MIN_CURVE_LENGTH: f64 = 1e-6;
pub const MAX_CURVE_LENGTH: f64 = 50.0;

#[derive(Clone, Debug)]
pub struct FuchsianGenerators {
    /// Unit-determinant matrices, one per fundamental-group generator.
    pub generators: Vec<Mat2>,
    pub generator_names: Vec<String>,
    /// Words whose matrix product must be +-identity, one per interior
    /// curve (the gluing identifications).
    pub relators: Vec<Word>,
    /// For each interior curve, a word representing its free-homotopy
    /// class (the near-side boundary holonomy, positive direction).
    pub curve_words: Vec<Word>,
    /// For each cusp slot (in decomposition order), a parabolic word.
    pub cusp_words: Vec<Word>,
    /// Global placement isometry per pants.
    pub placements: Vec<Mat2>,
}

impl FuchsianGenerators {
    pub fn evaluate(&self, word: &Word) -> Mat2 {
        let mut m = Mat2::identity();
        for &(g, s) in word {
            let gm = self.generators[g];
            m = m.mul(if s >= 0 { gm } else { gm.inverse() });
        }
        m.normalize()
    }

    /// Geodesic length of the conjugacy class of a hyperbolic word.
    pub fn word_length(&self, word: &Word) -> f64 {
        self.evaluate(word).translation_length()
    }

    /// Max entrywise deviation of any relator product from +-identity.
    pub fn max_relator_residual(&self) -> f64 {
        self.relators
            .iter()
            .map(|r| self.evaluate(r).distance_to_pm_identity())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn invert_word(w: &Word) -> Word {
    w.iter().rev().map(|&(g, s)| (g, -s)).collect()
}

fn concat_words(parts: &[&Word]) -> Word {
    let mut out = Word::new();
    for p in parts {
        out.extend_from_slice(p);
    }
    out
}

/// Per-pants holonomy words over that pants' two emitted generators
/// `(gen0, gen1)`: `A_0 = gen0`, `A_1 = gen1`, `A_2 = (A_0 A_1)^{-1}`.
fn slot_product_word(gen0: usize, gen1: usize, slot: usize) -> Word {
    match slot {
        0 => vec![(gen0, 1)],
        1 => vec![(gen1, 1)],
        2 => vec![(gen1, -1), (gen0, -1)],
        _ => unreachable!(),
    }
}

/// Build Fuchsian generators realizing all Fenchel–Nielsen data of `p`.
pub fn build_generators(p: &FnPoint) -> Result<FuchsianGenerators, GeometryError> {
    for &l in &p.lengths {
        if !(MIN_CURVE_LENGTH..=MAX_CURVE_LENGTH).contains(&l) {
            return Err(GeometryError::Conditioning(format!(
                "curve length {l} outside [{MIN_CURVE_LENGTH}, {MAX_CURVE_LENGTH}]; \
                 the hexagon realization would be numerically degenerate"
            )));
        }
    }
    let dec = &p.decomposition;
    let pants: Vec<PantsGeometry> = (0..dec.pants_count())
        .map(|pid| PantsGeometry::new(p.pants_boundary_lengths(pid)))
        .collect::<Result<_, _>>()?;

    // Spanning tree by BFS over the decomposition graph.
    let mut placed: Vec<Option<Mat2>> = vec![None; dec.pants_count()];
    placed[0] = Some(Mat2::identity());
    let mut tree_edge: Vec<bool> = vec![false; dec.curve_count()];
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(pid) = queue.pop_front() {
        for c in dec.curves() {
            let (p0, p1) = (c.ends[0].0, c.ends[1].0);
            let (near, far, near_slot, far_slot) = if p0 == pid {
                (p0, p1, c.ends[0].1, c.ends[1].1)
            } else if p1 == pid {
                (p1, p0, c.ends[1].1, c.ends[0].1)
            } else {
                continue;
            };
            if placed[far].is_some() {
                continue;
            }
            let g = gluing_map(
                placed[near].unwrap(),
                &pants[near],
                near_slot,
                &pants[far],
                far_slot,
                p.twists[c.id],
            );
            placed[far] = Some(g);
            tree_edge[c.id] = true;
            queue.push_back(far);
        }
    }
    let placements: Vec<Mat2> = placed
        .into_iter()
        .map(|m| m.expect("decomposition graph is connected"))
        .collect();

    // Emit generators: two per pants, conjugated into global position.
    let mut generators = Vec::new();
    let mut generator_names = Vec::new();
    let mut pants_gen_ids = Vec::new();
    for (pid, pg) in pants.iter().enumerate() {
        let place = placements[pid];
        let inv = place.inverse();
        let a0 = place.mul(pg.boundary_products[0]).mul(inv).normalize();
        let a1 = place.mul(pg.boundary_products[1]).mul(inv).normalize();
        pants_gen_ids.push((generators.len(), generators.len() + 1));
        generators.push(a0);
        generator_names.push(format!("p{pid}a"));
        generators.push(a1);
        generator_names.push(format!("p{pid}b"));
    }

    // Positive-direction holonomy word of a slot.
    let pos_word = |pid: usize, slot: usize| -> Word {
        let (g0, g1) = pants_gen_ids[pid];
        let w = slot_product_word(g0, g1, slot);
        if pants[pid].dir[slot] >= 0 {
            w
        } else {
            invert_word(&w)
        }
    };

    // Gluing generators for non-tree curves, plus one relator per curve.
    let mut relators = Vec::new();
    let mut curve_words = Vec::new();
    for c in dec.curves() {
        let (near, near_slot) = (c.ends[0].0, c.ends[0].1);
        let (far, far_slot) = (c.ends[1].0, c.ends[1].1);
        let near_word = pos_word(near, near_slot);
        let far_word = pos_word(far, far_slot);
        if tree_edge[c.id] {
            // Identification is already built into the far placement.
            relators.push(concat_words(&[&near_word, &far_word]));
        } else {
            let g = gluing_map(
                placements[near],
                &pants[near],
                near_slot,
                &pants[far],
                far_slot,
                p.twists[c.id],
            );
            let t = g.mul(placements[far].inverse()).normalize();
            let t_id = generators.len();
            generators.push(t);
            generator_names.push(format!("t{}", c.id));
            // Conjugate the far word by the gluing generator.
            let mut rel = near_word.clone();
            rel.push((t_id, 1));
            rel.extend(far_word.iter());
            rel.push((t_id, -1));
            relators.push(rel);
        }
        curve_words.push(near_word);
    }

    let cusp_words = dec
        .cusps()
        .iter()
        .map(|cusp| pos_word(cusp.pants, cusp.slot))
        .collect();

    let out = FuchsianGenerators {
        generators,
        generator_names,
        relators,
        curve_words,
        cusp_words,
        placements,
    };
    // Construction self-checks (cheap relative to what callers do next).
    let res = out.max_relator_residual();
    if res > 1e-8 {
        return Err(GeometryError::Conditioning(format!(
            "gluing relators deviate from identity by {res:.3e}"
        )));
    }
    for (c, w) in out.curve_words.iter().enumerate() {
        let got = out.word_length(w);
        let want = p.lengths[c];
        if (got - want).abs() > 1e-9 * want.max(1.0) {
            return Err(GeometryError::Conditioning(format!(
                "curve {c} trace length {got} does not reproduce FN length {want}"
            )));
        }
    }
    Ok(out)
}

/// The isometry placing the far pants so that its `far_slot` boundary glues
/// onto the near pants' `near_slot` boundary with twist `theta`.
fn gluing_map(
    near_placement: Mat2,
    near: &PantsGeometry,
    near_slot: usize,
    far: &PantsGeometry,
    far_slot: usize,
    theta: f64,
) -> Mat2 {
    let f_near = near.slot_frame(near_slot).frame;
    let f_far = far.slot_frame(far_slot).frame;
    near_placement
        .mul(f_near)
        .mul(Mat2::axis_translation(theta))
        .mul(Mat2::half_turn())
        .mul(f_far.inverse())
        .normalize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PantsDecomposition;
    use rand::{Rng, SeedableRng};

    fn theta_point(lengths: [f64; 3], twists: [f64; 3]) -> FnPoint {
        FnPoint::new(
            PantsDecomposition::genus2_theta(),
            lengths.to_vec(),
            twists.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn equal_lengths_zero_twists_round_trip() {
        let p = theta_point([2.0, 2.0, 2.0], [0.0, 0.0, 0.0]);
        let g = build_generators(&p).unwrap();
        for w in &g.curve_words {
            assert!((g.word_length(w) - 2.0).abs() < 1e-10);
        }
        assert!(g.max_relator_residual() < 1e-9);
    }

    #[test]
    fn dumbbell_round_trip() {
        let p = FnPoint::new(
            PantsDecomposition::genus2_dumbbell(),
            vec![1.1, 2.3, 0.7],
            vec![0.3, -0.8, 1.9],
        )
        .unwrap();
        let g = build_generators(&p).unwrap();
        for (c, w) in g.curve_words.iter().enumerate() {
            assert!((g.word_length(w) - p.lengths[c]).abs() < 1e-9);
        }
        assert!(g.max_relator_residual() < 1e-8);
    }

    #[test]
    fn random_genus2_points_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for case in 0..25 {
            let dec = if case % 2 == 0 {
                PantsDecomposition::genus2_theta()
            } else {
                PantsDecomposition::genus2_dumbbell()
            };
            let lengths: Vec<f64> = (0..3).map(|_| rng.gen_range(0.5..4.0)).collect();
            let twists: Vec<f64> = lengths.iter().map(|&l| rng.gen_range(0.0..l)).collect();
            let p = FnPoint::new(dec, lengths, twists).unwrap();
            let g = build_generators(&p).unwrap();
            for (c, w) in g.curve_words.iter().enumerate() {
                let got = g.word_length(w);
                assert!(
                    (got - p.lengths[c]).abs() <= 1e-9 * p.lengths[c].max(1.0),
                    "case {case} curve {c}: {got} vs {}",
                    p.lengths[c]
                );
            }
            assert!(g.max_relator_residual() < 1e-8, "case {case}");
        }
    }

    #[test]
    fn cusped_surfaces_have_parabolic_cusp_words() {
        let p = FnPoint::new(PantsDecomposition::sphere4(), vec![1.3], vec![0.4]).unwrap();
        let g = build_generators(&p).unwrap();
        assert_eq!(g.cusp_words.len(), 4);
        for w in &g.cusp_words {
            let m = g.evaluate(w);
            assert!((m.trace().abs() - 2.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn full_twist_preserves_curve_traces() {
        let base = theta_point([2.0, 2.4, 1.7], [0.3, 0.9, -0.2]);
        let twisted = theta_point([2.0, 2.4, 1.7], [0.3 + 2.0, 0.9, -0.2]);
        let g0 = build_generators(&base).unwrap();
        let g1 = build_generators(&twisted).unwrap();
        let mut t0: Vec<f64> = g0
            .curve_words
            .iter()
            .map(|w| g0.evaluate(w).trace().abs())
            .collect();
        let mut t1: Vec<f64> = g1
            .curve_words
            .iter()
            .map(|w| g1.evaluate(w).trace().abs())
            .collect();
        t0.sort_by(f64::total_cmp);
        t1.sort_by(f64::total_cmp);
        for (a, b) in t0.iter().zip(&t1) {
            assert!((a - b).abs() < 1e-9 * a.max(1.0));
        }
    }

    #[test]
    fn length_bounds_are_enforced() {
        let p = theta_point([1e-7, 2.0, 2.0], [0.0; 3]);
        assert!(matches!(
            build_generators(&p),
            Err(GeometryError::Conditioning(_))
        ));
    }
}
