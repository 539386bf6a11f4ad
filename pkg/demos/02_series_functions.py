
# coding: utf-8

# # The series behind the predictions

# The limits are expressed through a few slowly converging series. Each evaluator returns a value and a bound on its own truncation error.

# In[1]:

import numpy as np

from costmst.theory import (zeta3_eval, c1_eval, C_gamma_eval, f, f_prime, g, f_eval,
                            solve_beta_case2, solve_beta_case3)


# In[2]:

for ev, name in [(zeta3_eval(), "zeta(3)"), (c1_eval(), "c1"), (C_gamma_eval(0.5), "C_0.5")]:
    print("%-8s %.15f  +- %.1e  (%d terms)" % (name, ev.value, ev.abs_error_bound, ev.terms_used))


# On [0, 1] there is a closed form to compare against: f(b) = zeta(3) + b - b^2/12.

# In[3]:

z = zeta3_eval().value
for b in [0.0, 0.25, 0.5, 1.0]:
    ev = f_eval(b)
    print(b, ev.value, z + b - b * b / 12, ev.abs_error_bound)


# f' falls from 1 toward 0 and g = f - b f' rises from zeta(3), which is what makes the root problems well posed.

# In[4]:

grid = np.geomspace(1e-2, 100, 9)
print("   beta       f        f'       g")
for b in grid:
    print("%8.3f %8.4f %8.5f %8.4f" % (b, f(b), f_prime(b), g(b)))


# In[5]:

for a in [0.45, 0.3, 0.1, 0.01]:
    b = solve_beta_case2(a)
    print("f'(b) = 2*%.2f  ->  b = %.6f" % (a, b))
for a in [1.25, 2.0, 5.0]:
    b = solve_beta_case3(a)
    print("g(b) = %.2f  ->  b = %.6f" % (a, b))
