
# coding: utf-8

# # A small constrained spanning tree, solved three ways

# Every edge of the complete graph gets a weight and a cost, both uniform on (0,1). We want the lightest spanning tree whose total cost stays under a budget c0. On 7 vertices there are only 7^5 = 16807 spanning trees, so brute force is available as a reference.

# In[1]:

import numpy as np

from costmst.instances import sample_instance, mst, exact_constrained_mst, tree_totals
from costmst.lagrange import maximize_dual, phi, min_cost_tree


# In[2]:

inst = sample_instance(7, gamma=1.0, seed=42)
print(np.round(inst.weights, 3))


# The plain MST ignores cost entirely, and the cheapest tree ignores weight. A budget between the two costs makes the problem interesting.

# In[3]:

light = mst(inst, inst.weights)
cheap = min_cost_tree(inst)
print("lightest tree  W=%.4f C=%.4f" % (light.total_weight, light.total_cost))
print("cheapest tree  W=%.4f C=%.4f" % (cheap.total_weight, cheap.total_cost))
c0 = 0.5 * (light.total_cost + cheap.total_cost)
print("budget", c0)


# # Brute force

# In[4]:

best = exact_constrained_mst(inst, c0)
print("exact optimum  W=%.4f C=%.4f" % (best.total_weight, best.total_cost))

w, c = tree_totals(inst)
print(len(w), "trees,", (c <= c0).sum(), "within budget")


# # The dual function

# phi(lam) is the min over trees of W + lam (C - c0). It is concave and piecewise linear, and never exceeds the constrained optimum.

# In[5]:

lams = np.linspace(0, 3, 13)
for lam in lams:
    print("%5.2f  %.4f" % (lam, phi(inst, lam, c0).phi))


# In[6]:

sol = maximize_dual(inst, c0)
print("lambda* = %.6f  phi* = %.6f  (gap to optimum %.2e)" % (sol.lambda_star, sol.phi_star, best.total_weight - sol.phi_star))


# The repaired tree walks from one optimal tree at lambda* toward the other by edge swaps and stops once the cost is within one edge of the budget.

# In[7]:

rep = sol.repaired
print("repaired  W=%.4f C=%.4f  budget overshoot %.4f" % (rep.total_weight, rep.total_cost, rep.total_cost - c0))
print(rep.edges)
