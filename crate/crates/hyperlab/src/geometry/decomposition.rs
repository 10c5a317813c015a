//! Pants decompositions and Fenchel–Nielsen coordinates.

use std::sync::Arc;

use super::GeometryError;

pub type PantsId = usize;
pub type CurveId = usize;
/// Slot index within a pants: 0, 1 or 2.
pub type SlotIndex = usize;

/// An interior decomposition curve, glued between two pants slots (the two
/// slots may belong to the same pants).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteriorCurve {
    pub id: CurveId,
    /// `ends[0]` is the owning side: circle parametrization and twist are
    /// anchored there.
    pub ends: [(PantsId, SlotIndex); 2],
}

/// A pants slot left unglued; it becomes a cusp.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspSlot {
    pub pants: PantsId,
    pub slot: SlotIndex,
}

/// What a given pants slot is attached to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlotAttachment {
    /// Interior curve id plus which end (0 or 1) of that curve.
    Curve(CurveId, usize),
    Cusp,
}

/// Combinatorics of a pants decomposition of a surface of type `(g, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PantsDecomposition {
    pants_count: usize,
    curves: Vec<InteriorCurve>,
    cusps: Vec<CuspSlot>,
    genus: usize,
    punctures: usize,
    /// slot_table[pants][slot]
    slot_table: Vec<[SlotAttachment; 3]>,
}

impl PantsDecomposition {
    pub fn new(
        pants_count: usize,
        curves: Vec<InteriorCurve>,
        cusps: Vec<CuspSlot>,
    ) -> Result<Self, GeometryError> {
        let n = cusps.len();
        if pants_count == 0 {
            return Err(GeometryError::BadDecomposition(
                "pants count must be positive".into(),
            ));
        }
        // chi = -pants_count = 2 - 2g - n
        let two_g = 2 + pants_count;
        if two_g < n || (two_g - n) % 2 != 0 {
            return Err(GeometryError::BadDecomposition(format!(
                "no genus fits {} pants with {} cusps",
                pants_count, n
            )));
        }
        let genus = (two_g - n) / 2;
        if curves.len() != 3 * genus + n - 3 {
            return Err(GeometryError::BadDecomposition(format!(
                "expected {} interior curves, got {}",
                3 * genus + n - 3,
                curves.len()
            )));
        }
        let mut slot_table = vec![[None::<SlotAttachment>; 3]; pants_count];
        let mut occupy =
            |p: PantsId, s: SlotIndex, what: SlotAttachment| -> Result<(), GeometryError> {
                if p >= pants_count || s >= 3 {
                    return Err(GeometryError::BadDecomposition(format!(
                        "slot ({p}, {s}) out of range"
                    )));
                }
                if slot_table[p][s].is_some() {
                    return Err(GeometryError::BadDecomposition(format!(
                        "slot ({p}, {s}) used twice"
                    )));
                }
                slot_table[p][s] = Some(what);
                Ok(())
            };
        for (i, c) in curves.iter().enumerate() {
            if c.id != i {
                return Err(GeometryError::BadDecomposition(
                    "curve ids must be 0..k in order".into(),
                ));
            }
            occupy(c.ends[0].0, c.ends[0].1, SlotAttachment::Curve(c.id, 0))?;
            occupy(c.ends[1].0, c.ends[1].1, SlotAttachment::Curve(c.id, 1))?;
        }
        for cusp in &cusps {
            occupy(cusp.pants, cusp.slot, SlotAttachment::Cusp)?;
        }
        let slot_table: Vec<[SlotAttachment; 3]> = slot_table
            .into_iter()
            .map(|row| {
                Ok([
                    row[0].ok_or_else(|| {
                        GeometryError::BadDecomposition("unfilled slot".into())
                    })?,
                    row[1].ok_or_else(|| {
                        GeometryError::BadDecomposition("unfilled slot".into())
                    })?,
                    row[2].ok_or_else(|| {
                        GeometryError::BadDecomposition("unfilled slot".into())
                    })?,
                ])
            })
            .collect::<Result<_, GeometryError>>()?;
        let dec = PantsDecomposition {
            pants_count,
            curves,
            cusps,
            genus,
            punctures: n,
            slot_table,
        };
        if !dec.is_connected() {
            return Err(GeometryError::BadDecomposition(
                "decomposition graph is not connected".into(),
            ));
        }
        Ok(dec)
    }

    pub fn pants_count(&self) -> usize {
        self.pants_count
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn punctures(&self) -> usize {
        self.punctures
    }

    pub fn curves(&self) -> &[InteriorCurve] {
        &self.curves
    }

    pub fn cusps(&self) -> &[CuspSlot] {
        &self.cusps
    }

    pub fn curve_count(&self) -> usize {
        self.curves.len()
    }

    pub fn slot(&self, p: PantsId, s: SlotIndex) -> SlotAttachment {
        self.slot_table[p][s]
    }

    /// The curve length index attached to each slot of the pants, `None`
    /// for cusps.
    pub fn pants_slot_curves(&self, p: PantsId) -> [Option<CurveId>; 3] {
        let mut out = [None; 3];
        for (s, item) in out.iter_mut().enumerate() {
            if let SlotAttachment::Curve(c, _) = self.slot_table[p][s] {
                *item = Some(c);
            }
        }
        out
    }

    fn adjacency_without(&self, removed: &[CurveId]) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.pants_count];
        for c in &self.curves {
            if removed.contains(&c.id) {
                continue;
            }
            adj[c.ends[0].0].push(c.ends[1].0);
            adj[c.ends[1].0].push(c.ends[0].0);
        }
        adj
    }

    fn component_count(&self, removed: &[CurveId]) -> usize {
        let adj = self.adjacency_without(removed);
        let mut seen = vec![false; self.pants_count];
        let mut comps = 0;
        for start in 0..self.pants_count {
            if seen[start] {
                continue;
            }
            comps += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.component_count(&[]) == 1
    }

    /// Does cutting the surface along this set of curves disconnect it?
    pub fn separates(&self, curves: &[CurveId]) -> bool {
        self.component_count(curves) > 1
    }

    /// A single curve is separating iff it is a bridge of the graph.
    pub fn is_separating(&self, curve: CurveId) -> bool {
        self.separates(&[curve])
    }

    // Standard test decompositions.

    /// Genus-2 "theta" decomposition: two pants glued along three curves.
    /// Each curve is non-separating; the three together separate.
    pub fn genus2_theta() -> Arc<Self> {
        Arc::new(
            Self::new(
                2,
                vec![
                    InteriorCurve {
                        id: 0,
                        ends: [(0, 0), (1, 0)],
                    },
                    InteriorCurve {
                        id: 1,
                        ends: [(0, 1), (1, 1)],
                    },
                    InteriorCurve {
                        id: 2,
                        ends: [(0, 2), (1, 2)],
                    },
                ],
                vec![],
            )
            .expect("theta decomposition is valid"),
        )
    }

    /// Genus-2 "dumbbell": a separating middle curve (id 0) plus one handle
    /// curve inside each of the two one-holed tori (ids 1, 2).
    pub fn genus2_dumbbell() -> Arc<Self> {
        Arc::new(
            Self::new(
                2,
                vec![
                    InteriorCurve {
                        id: 0,
                        ends: [(0, 0), (1, 0)],
                    },
                    InteriorCurve {
                        id: 1,
                        ends: [(0, 1), (0, 2)],
                    },
                    InteriorCurve {
                        id: 2,
                        ends: [(1, 1), (1, 2)],
                    },
                ],
                vec![],
            )
            .expect("dumbbell decomposition is valid"),
        )
    }

    /// Four-punctured sphere: two pants joined by one curve, two cusps each.
    pub fn sphere4() -> Arc<Self> {
        Arc::new(
            Self::new(
                2,
                vec![InteriorCurve {
                    id: 0,
                    ends: [(0, 0), (1, 0)],
                }],
                vec![
                    CuspSlot { pants: 0, slot: 1 },
                    CuspSlot { pants: 0, slot: 2 },
                    CuspSlot { pants: 1, slot: 1 },
                    CuspSlot { pants: 1, slot: 2 },
                ],
            )
            .expect("(0,4) decomposition is valid"),
        )
    }

    /// Five-punctured sphere: chain of three pants.
    pub fn sphere5() -> Arc<Self> {
        Arc::new(
            Self::new(
                3,
                vec![
                    InteriorCurve {
                        id: 0,
                        ends: [(0, 0), (1, 0)],
                    },
                    InteriorCurve {
                        id: 1,
                        ends: [(1, 1), (2, 0)],
                    },
                ],
                vec![
                    CuspSlot { pants: 0, slot: 1 },
                    CuspSlot { pants: 0, slot: 2 },
                    CuspSlot { pants: 1, slot: 2 },
                    CuspSlot { pants: 2, slot: 1 },
                    CuspSlot { pants: 2, slot: 2 },
                ],
            )
            .expect("(0,5) decomposition is valid"),
        )
    }

    /// Twice-punctured torus: two pants joined by two curves, one cusp each.
    pub fn torus2() -> Arc<Self> {
        Arc::new(
            Self::new(
                2,
                vec![
                    InteriorCurve {
                        id: 0,
                        ends: [(0, 0), (1, 0)],
                    },
                    InteriorCurve {
                        id: 1,
                        ends: [(0, 1), (1, 1)],
                    },
                ],
                vec![
                    CuspSlot { pants: 0, slot: 2 },
                    CuspSlot { pants: 1, slot: 2 },
                ],
            )
            .expect("(1,2) decomposition is valid"),
        )
    }
}

/// A point of Teichmüller space: a decomposition plus per-curve hyperbolic
/// length and twist. Twists are measured in length units along the curve;
/// twisting by the curve's full length is one Dehn twist.
#[derive(Clone, Debug)]
pub struct FnPoint {
    pub decomposition: Arc<PantsDecomposition>,
    pub lengths: Vec<f64>,
    pub twists: Vec<f64>,
}

impl FnPoint {
    pub fn new(
        decomposition: Arc<PantsDecomposition>,
        lengths: Vec<f64>,
        twists: Vec<f64>,
    ) -> Result<Self, GeometryError> {
        let k = decomposition.curve_count();
        if lengths.len() != k || twists.len() != k {
            return Err(GeometryError::Domain(format!(
                "expected {} lengths and twists, got {} and {}",
                k,
                lengths.len(),
                twists.len()
            )));
        }
        for &l in &lengths {
            if !(l.is_finite() && l > 0.0) {
                return Err(GeometryError::Domain(format!(
                    "curve lengths must be positive and finite, got {l}"
                )));
            }
        }
        for &t in &twists {
            if !t.is_finite() {
                return Err(GeometryError::Domain("twists must be finite".into()));
            }
        }
        Ok(FnPoint {
            decomposition,
            lengths,
            twists,
        })
    }

    pub fn genus(&self) -> usize {
        self.decomposition.genus()
    }

    pub fn punctures(&self) -> usize {
        self.decomposition.punctures()
    }

    /// Boundary lengths of one pants; 0.0 encodes a cusp slot.
    pub fn pants_boundary_lengths(&self, p: PantsId) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (s, item) in out.iter_mut().enumerate() {
            if let SlotAttachment::Curve(c, _) = self.decomposition.slot(p, s) {
                *item = self.lengths[c];
            }
        }
        out
    }

    pub fn min_length(&self) -> f64 {
        self.lengths.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

fn fmt_float(v: f64) -> String {
    // >= 15 significant digits as required by the serialization contract.
    format!("{v:.16e}")
}

/// Serialize an `FnPoint` with the fixed field order
/// `genus, punctures, pants, curves, lengths, twists` and full-precision
/// decimal coordinates.
pub fn fn_point_to_json(p: &FnPoint) -> String {
    let dec = &p.decomposition;
    let mut pants_parts = Vec::new();
    for pid in 0..dec.pants_count() {
        let slots: Vec<String> = (0..3)
            .map(|s| match dec.slot(pid, s) {
                SlotAttachment::Curve(c, e) => format!("{{\"curve\":{c},\"end\":{e}}}"),
                SlotAttachment::Cusp => "\"cusp\"".to_string(),
            })
            .collect();
        pants_parts.push(format!("[{}]", slots.join(",")));
    }
    let curves_parts: Vec<String> = dec
        .curves()
        .iter()
        .map(|c| {
            format!(
                "{{\"id\":{},\"ends\":[[{},{}],[{},{}]]}}",
                c.id, c.ends[0].0, c.ends[0].1, c.ends[1].0, c.ends[1].1
            )
        })
        .collect();
    let lengths: Vec<String> = p.lengths.iter().map(|&v| fmt_float(v)).collect();
    let twists: Vec<String> = p.twists.iter().map(|&v| fmt_float(v)).collect();
    format!(
        "{{\"genus\":{},\"punctures\":{},\"pants\":[{}],\"curves\":[{}],\"lengths\":[{}],\"twists\":[{}]}}",
        dec.genus(),
        dec.punctures(),
        pants_parts.join(","),
        curves_parts.join(","),
        lengths.join(","),
        twists.join(",")
    )
}

/// Parse the JSON produced by [`fn_point_to_json`].
pub fn fn_point_from_json(text: &str) -> Result<FnPoint, GeometryError> {
    let v: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| GeometryError::Serialization(e.to_string()))?;
    let obj = v
        .as_object()
        .ok_or_else(|| GeometryError::Serialization("expected object".into()))?;
    let pants = obj
        .get("pants")
        .and_then(|p| p.as_array())
        .ok_or_else(|| GeometryError::Serialization("missing pants".into()))?;
    let curves_json = obj
        .get("curves")
        .and_then(|p| p.as_array())
        .ok_or_else(|| GeometryError::Serialization("missing curves".into()))?;
    let mut curves = Vec::new();
    for c in curves_json {
        let id = c["id"]
            .as_u64()
            .ok_or_else(|| GeometryError::Serialization("curve id".into()))? as usize;
        let ends = c["ends"]
            .as_array()
            .ok_or_else(|| GeometryError::Serialization("curve ends".into()))?;
        let get = |i: usize, j: usize| -> Result<usize, GeometryError> {
            ends[i][j]
                .as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| GeometryError::Serialization("curve end index".into()))
        };
        curves.push(InteriorCurve {
            id,
            ends: [(get(0, 0)?, get(0, 1)?), (get(1, 0)?, get(1, 1)?)],
        });
    }
    let mut cusps = Vec::new();
    for (pid, slots) in pants.iter().enumerate() {
        let slots = slots
            .as_array()
            .ok_or_else(|| GeometryError::Serialization("pants slots".into()))?;
        for (s, slot) in slots.iter().enumerate() {
            if slot.as_str() == Some("cusp") {
                cusps.push(CuspSlot { pants: pid, slot: s });
            }
        }
    }
    let dec = Arc::new(PantsDecomposition::new(pants.len(), curves, cusps)?);
    let floats = |key: &str| -> Result<Vec<f64>, GeometryError> {
        obj.get(key)
            .and_then(|x| x.as_array())
            .ok_or_else(|| GeometryError::Serialization(format!("missing {key}")))?
            .iter()
            .map(|x| {
                x.as_f64()
                    .ok_or_else(|| GeometryError::Serialization(format!("bad number in {key}")))
            })
            .collect()
    };
    FnPoint::new(dec, floats("lengths")?, floats("twists")?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_counts() {
        let d = PantsDecomposition::genus2_theta();
        assert_eq!(d.genus(), 2);
        assert_eq!(d.punctures(), 0);
        assert_eq!(d.curve_count(), 3);
        assert!(!d.is_separating(0));
        assert!(d.separates(&[0, 1, 2]));
        assert!(!d.separates(&[0, 1]));
    }

    #[test]
    fn dumbbell_middle_curve_separates() {
        let d = PantsDecomposition::genus2_dumbbell();
        assert_eq!(d.genus(), 2);
        assert!(d.is_separating(0));
        assert!(!d.is_separating(1));
        assert!(!d.is_separating(2));
    }

    #[test]
    fn cusped_presets() {
        assert_eq!(PantsDecomposition::sphere4().genus(), 0);
        assert_eq!(PantsDecomposition::sphere4().punctures(), 4);
        assert_eq!(PantsDecomposition::sphere5().punctures(), 5);
        assert_eq!(PantsDecomposition::torus2().genus(), 1);
        assert_eq!(PantsDecomposition::torus2().punctures(), 2);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let p = FnPoint::new(
            PantsDecomposition::genus2_theta(),
            vec![1.25, 2.5, 0.1234567890123456],
            vec![0.0, -0.75, 3.0_f64.sqrt()],
        )
        .unwrap();
        let text = fn_point_to_json(&p);
        assert!(text.starts_with("{\"genus\":2,\"punctures\":0,\"pants\":"));
        let q = fn_point_from_json(&text).unwrap();
        assert_eq!(p.lengths, q.lengths);
        assert_eq!(p.twists, q.twists);
        assert_eq!(*p.decomposition, *q.decomposition);
    }

    #[test]
    fn rejects_bad_lengths() {
        let d = PantsDecomposition::genus2_theta();
        assert!(FnPoint::new(d.clone(), vec![1.0, -1.0, 1.0], vec![0.0; 3]).is_err());
        assert!(FnPoint::new(d, vec![1.0, 1.0], vec![0.0; 2]).is_err());
    }
}
