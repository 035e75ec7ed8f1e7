"""Walk through the smallest connected pieces of the d=2, r=2 model.

Run: python3 demos/01_census_tour.py
"""

from locograph import build_census, build_quotient, is_r_locally_lattice, min_distance
from locograph.lattice import enumerate_hnf

census = build_census(2, 2, 40)
print("gamma(n) for n = 1..40:")
print(" ".join(str(census.gamma[n]) for n in range(1, 41)))

first = next(n for n in range(1, 41) if census.gamma[n])
print(f"\nfirst non-empty index: {first}")
for orbit in census.orbits(first):
    g = build_quotient(orbit.rep, orbit)
    print(f"  rep {orbit.rep.to_list()}  md={orbit.min_distance}  orbit size={orbit.orbit_size}  "
          f"vertices={g.n}  edges={g.num_edges}  2-locally Z^2: {is_r_locally_lattice(g, 2, 2)}")

# The md >= 6 threshold is sharp: an md-5 quotient is 1-local but not 2-local.
lat = next(lat for n in range(20, 41) for lat in enumerate_hnf(2, n) if min_distance(lat) == 5)
g = build_quotient(lat)
print(f"\nmd-5 example {lat.to_list()}: 1-local {is_r_locally_lattice(g, 2, 1)}, 2-local {is_r_locally_lattice(g, 2, 2)}")
