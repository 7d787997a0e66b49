use crate::graph::{AuxMultigraph, OracleError};
use crate::label::Label;

/// Largest combined edge count accepted by [`check_red_blue_eulerian`].
pub const RED_BLUE_EDGE_CAP: usize = 12;

struct Search {
    /// Edge types: endpoints, colour (false = red), remaining count.
    kinds: Vec<(Label, Label, bool, u16)>,
    start: Label,
    left: usize,
}

impl Search {
    fn go(&mut self, at: Label, blue_next: bool) -> bool {
        if self.left == 0 {
            return at == self.start;
        }
        for t in 0..self.kinds.len() {
            let (a, b, blue, count) = self.kinds[t];
            if blue != blue_next || count == 0 || (a != at && b != at) {
                continue;
            }
            let to = if a == at { b } else { a };
            self.kinds[t].3 -= 1;
            self.left -= 1;
            let found = self.go(to, !blue_next);
            self.kinds[t].3 += 1;
            self.left += 1;
            if found {
                return true;
            }
        }
        false
    }
}

/// Whether the red multigraph `r` and the blue multigraph `b` together admit a
/// closed walk that uses every edge once and alternates colours. Two empty
/// multigraphs admit the empty walk.
pub fn check_red_blue_eulerian(r: &AuxMultigraph, b: &AuxMultigraph) -> Result<bool, OracleError> {
    let (nr, nb) = (r.edge_count(), b.edge_count());
    if nr + nb > RED_BLUE_EDGE_CAP {
        return Err(OracleError::TooLarge { what: "red-blue eulerian check", size: nr + nb, cap: RED_BLUE_EDGE_CAP });
    }
    if nr != nb {
        return Ok(false);
    }
    if nr == 0 {
        return Ok(true);
    }
    let mut kinds: Vec<(Label, Label, bool, u16)> = r.edges().map(|(x, y, c)| (x, y, false, c)).collect();
    kinds.extend(b.edges().map(|(x, y, c)| (x, y, true, c)));
    // A closed alternating walk can be rotated to start with any red edge and
    // reversed, so the first red edge and its direction are fixed.
    let (s, t, _, _) = kinds[0];
    kinds[0].3 -= 1;
    let mut search = Search { kinds, start: s, left: nr + nb - 1 };
    Ok(search.go(t, true))
}
