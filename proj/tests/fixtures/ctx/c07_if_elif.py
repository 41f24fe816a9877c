def grade(score):
    if score >= 90:
        label = "A"
    elif score >= 80:
        label = "B"
    elif score >= 70:
        label = "C"
    else:
        label = "F"
    return label


if __name__ == "__main__":
    print(grade(88))
