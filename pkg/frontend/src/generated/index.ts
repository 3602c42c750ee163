// GENERATED by the mlkit binding generator. Do not edit.

export { linearRegression } from "./linear_regression.js";
export { logisticRegression } from "./logistic_regression.js";
export { kmeans } from "./kmeans.js";
export { knn } from "./knn.js";
export { kfn } from "./kfn.js";
export { kde } from "./kde.js";
export { ffn } from "./ffn.js";
