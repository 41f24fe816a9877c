import matplotlib.pyplot as plt
fig, ax = plt.subplots(figsize=(8,4))
ax.plot(xs, ys, label ='signal')
ax.set_xlabel('time');
ax.legend(loc='upper right')
plt.tight_layout()
plt.savefig('out.png', dpi = 150)
