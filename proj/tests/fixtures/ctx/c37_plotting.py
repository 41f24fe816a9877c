import matplotlib.pyplot as plt

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
ax1.plot(times, values, label="raw", linewidth=0.8)
ax1.set_xlabel("time")
ax2.hist(values, bins=40, alpha=0.6)
for ax in (ax1, ax2):
    ax.grid(True)
fig.tight_layout()
fig.savefig("report.png", dpi=150)
