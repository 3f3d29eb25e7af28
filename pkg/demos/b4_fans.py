"""The Dressian of the 4-cube as a fan, by two independent methods, and the
three-face subsystem that cuts out the same finite support.

Takes about four minutes. Run: python3 demos/b4_fans.py
"""

import time

from coxdressian import build_quotient, equations_up_to, prevariety_fan, strong_exchange_system
from coxdressian.fans import prevariety_fan_by_refinement
from coxdressian.tropical import is_member
from coxdressian.verify import Sampler, b4_counterexample

q = build_quotient(("B", 4, 4))
full = strong_exchange_system(q)
faces = equations_up_to(q, 3)
print(f"{len(full)} equations, {len(faces)} of them on 3-faces")

for name, method in (("argmin patterns", prevariety_fan), ("closed-cone refinement", prevariety_fan_by_refinement)):
    t = time.time()
    fan = method(full, allow_large=True)
    print(f"{name:24} f-vector {fan.f_vector}, lineality {fan.lineality_dim}, {time.time() - t:.0f}s")

three = prevariety_fan(faces, allow_large=True)
print(f"{'3-face subsystem':24} f-vector {three.f_vector}")
s = Sampler(0, "demo")
pts = [s.fan_point(three, q) for _ in range(200)]
print("random finite points of the 3-face fan that satisfy every equation:", sum(is_member(p, full)[0] for p in pts), "/ 200")

mu = b4_counterexample(q)
print("with infinite entries the subsystem is not enough:")
print("  3-face equations hold:", is_member(mu, faces)[0], "| full system holds:", is_member(mu, full)[0])
