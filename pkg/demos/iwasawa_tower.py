"""Build a 5-adic measure from the bundled U_5-compatible tower and integrate characters against it."""

from importlib.resources import files

from asai.iwasawa import integrate, load_tower, measure_from_tower, ordinary_projector
from asai.numfield import DirichletChar

mod, towers = load_tower(files("asai") / "data" / "tower_example.json")
mu = measure_from_tower(mod, towers)
print(f"p = {mod.p}, M = {mod.M}, levels = {sorted(mu.levels)}, compatible = {mu.certified}")
print("ordinary projector:\n", ordinary_projector(mod))

chars = {"trivial": DirichletChar.trivial(1), "omega": DirichletChar(5, 4, {2: 1}),
         "omega^2": DirichletChar(5, 2, {2: 1}), "conductor 25": DirichletChar(25, 20, {2: 1})}
for name, chi in chars.items():
    for j in range(3):
        val = integrate(mu, chi, j)
        print(f"{name:>12s}  j = {j}  ", [[int(x) for x in row] for row in val])
