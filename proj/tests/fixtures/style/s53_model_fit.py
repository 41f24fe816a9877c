from sklearn.linear_model import LogisticRegression
from sklearn.model_selection import train_test_split
X_train,X_test,y_train,y_test = train_test_split(X, y, test_size=0.2)
clf = LogisticRegression(C = 1.0, max_iter=200)
clf.fit(X_train,y_train)
score=clf.score(X_test, y_test)
print("accuracy: %.3f"%score)
