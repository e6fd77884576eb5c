"""Ends of a regular tree, viewed as boundary points of a building.

Two sequences (edges and vertices along the same ray) converge to the same
end; distinct ends are separated by their horofunctions.
"""

from bordify.building_points import BuildingSequence, building_converges
from bordify.buildings import make_tree
from bordify.repro import default_ends, end_sequences

T = make_tree((3, 3), 3)
residues = T.residues()
y0 = T.vertex_residue(())
print(f"tree of valence 3, window of {len(residues)} residues")

vectors = {}
for k, end in enumerate(default_ends(T)):
    edges, vertices = end_sequences(end, 24)
    le = building_converges(T, edges, 6, residues)
    lv = building_converges(T, vertices, 6, residues)
    h = tuple(BuildingSequence(T, edges, 6).horofunction(y, y0) for y in residues)
    vectors[k] = h
    print(f"  end {k}: edge and vertex sequences share a limit: {le == lv}; h on the first residues {[str(a) for a in h[:4]]}")

print(f"distinct horofunction vectors: {len(set(vectors.values()))} of {len(vectors)}")
