from sklearn.linear_model import LogisticRegression
from sklearn.model_selection import train_test_split

X_train, X_test, y_train, y_test = train_test_split(X, y, test_size=0.2)
model = LogisticRegression(C=0.5, max_iter=200)
model.fit(X_train, y_train)
score = model.score(X_test, y_test)
predictions = model.predict(X_test)
probabilities = model.predict_proba(X_test)[:, 1]
print("accuracy", round(score, 3))
